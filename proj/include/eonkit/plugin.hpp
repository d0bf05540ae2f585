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

#ifndef EONKIT_PLUGIN_HPP_
#define EONKIT_PLUGIN_HPP_

#include <condition_variable>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "eonkit/errors.hpp"
#include "eonkit/oracles.hpp"

namespace eonkit {
namespace oracles {

// Each protocol failure mode is its own type so callers can tell a slow
// plugin from a broken one.
class PluginTimeout : public OracleError {
 public:
  using OracleError::OracleError;
};
class PluginMalformed : public OracleError {
 public:
  using OracleError::OracleError;
};
class PluginIdMismatch : public OracleError {
 public:
  using OracleError::OracleError;
};
class PluginUnavailable : public OracleError {
 public:
  using OracleError::OracleError;
};

std::string base64_encode(const std::vector<float>& values);
std::vector<float> base64_decode_floats(const std::string& text);

struct PluginConfig {
  std::vector<std::string> command;  // argv, command[0] resolved via PATH
  double timeout_s = 30.0;           // per request
};

// Line-delimited JSON over the child's stdin/stdout. One request object per
// line out: {"id", "op", "sample_rate", "samples_b64"}; one response object
// per line back, matched by id. Requests may be pipelined and answered out
// of order; any protocol violation poisons the process and every in-flight
// request fails.
class PluginProcess {
 public:
  explicit PluginProcess(PluginConfig config);
  ~PluginProcess();

  PluginProcess(const PluginProcess&) = delete;
  PluginProcess& operator=(const PluginProcess&) = delete;

  // Sends one request (id assigned internally) and blocks until the
  // matching response line arrives or timeout_s elapses. Returns the raw
  // response JSON text for the caller to parse.
  std::string request_response(const std::string& op,
                               const audio::AudioClip& clip);

  bool alive() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

class PluginClassifier : public Classifier {
 public:
  PluginClassifier(PluginConfig config, std::vector<std::string> labels);

  ClassScores classify(const audio::AudioClip& clip) const override;
  std::vector<std::string> labels() const override { return labels_; }

 private:
  std::shared_ptr<PluginProcess> process_;
  std::vector<std::string> labels_;
};

class PluginTranscriber : public Transcriber {
 public:
  explicit PluginTranscriber(PluginConfig config);

  TranscriptResult transcribe(const audio::AudioClip& clip,
                              const std::string& utterance_id) const override;

 private:
  std::shared_ptr<PluginProcess> process_;
};

}  // namespace oracles
}  // namespace eonkit

#endif  // EONKIT_PLUGIN_HPP_
