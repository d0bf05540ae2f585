// Copyright 2026 The eonkit authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EONKIT_SAMPLE_HPP_
#define EONKIT_SAMPLE_HPP_

#include <string>

#include "eonkit/audio.hpp"

namespace eonkit {

// A labeled utterance as the optimizer and evaluators consume it: the clean
// clip plus its ground truth. Pre-filtering guarantees the clean clip is
// correctly classified and transcribed before any of this reaches a fitness
// or ESR computation.
struct Sample {
  audio::AudioClip clip;
  std::string emotion_label;
  std::string transcript;  // raw ground-truth text
  std::string utterance_id;
  std::string speaker_id;
};

}  // namespace eonkit

#endif  // EONKIT_SAMPLE_HPP_
