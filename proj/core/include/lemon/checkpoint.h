/* Copyright 2026 The lemon-ner Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef LEMON_CHECKPOINT_H_
#define LEMON_CHECKPOINT_H_

#include <filesystem>
#include <iosfwd>
#include <memory>

#include "lemon/model.h"

namespace lemon {

// Line-oriented text: a format tag, the model configuration, the three
// vocabularies, the lexicon, then every parameter tensor with its values in
// hexadecimal floating point so a reload is bit-exact.
void save_checkpoint(std::ostream& out, Model& model);
void save_checkpoint(const std::filesystem::path& path, Model& model);

// Throws ParseError on a malformed file and ConfigError when a tensor does
// not fit the stored configuration.
std::unique_ptr<Model> load_checkpoint(std::istream& in);
std::unique_ptr<Model> load_checkpoint(const std::filesystem::path& path);

}  // namespace lemon

#endif  // LEMON_CHECKPOINT_H_
