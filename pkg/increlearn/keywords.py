##  increlearn -- semi-supervised incremental learning on feature vectors
##   Copyright 2019 - 2026 increlearn developers
##
##   Licensed under the Apache License, Version 2.0 (the "License");
##   you may not use this file except in compliance with the License.
##   You may obtain a copy of the License at
##
##       http://www.apache.org/licenses/LICENSE-2.0
##
##   Unless required by applicable law or agreed to in writing, software
##   distributed under the License is distributed on an "AS IS" BASIS,
##   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
##   See the License for the specific language governing permissions and
##   limitations under the License.

"""keywords used in run configuration files and run manifests"""

## global
seed = 'seed'
model = 'model'
space = 'space'

## input files
data_train = 'data.train'
data_validation = 'data.validation'

## groups; a group key is <prefix><field>, e.g. train.learning_rate
synth = 'synth.'
train = 'train.'
labeler = 'labeler.'
sweep = 'sweep.'

## single values
threshold = 'acquisition.threshold'
balance_q = 'balance.Q'
capacity = 'pending.capacity'
learn_fraction = 'protocol.learn_fraction'
ablation_rate = 'ablation.rate'

## manifest entries (ignored when a manifest is read back as configuration)
manifest = 'manifest.'
manifest_command = 'manifest.command'
manifest_version = 'manifest.version'
manifest_config = 'manifest.config'
manifest_out = 'manifest.out'

## fields of the groups
synth_fields = ['N', 'D', 'main_clusters', 'main_size', 'main_std',
                'novel_clusters', 'novel_size', 'novel_std', 'novel_offset',
                'novel_lateral', 'novel_lookalike', 'scale',
                'core_radius', 'lateral', 'train_fraction', 'seed', 'tune',
                'offset_step', 'offset_max', 'min_main_accuracy',
                'max_novel_accuracy', 'names']
train_fields = ['batch_size', 'learning_rate', 'momentum', 'max_epochs',
                'early_stop_patience', 'val_fraction', 'warmup_epochs']
labeler_fields = ['M', 'gamma', 'restarts', 'max_iter', 'tol']
sweep_fields = ['s_values', 'q_values', 'repeats', 'probe_q_values', 'jobs']
