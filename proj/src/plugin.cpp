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

#include "eonkit/plugin.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstring>
#include <deque>
#include <thread>

#include <json.hpp>

namespace eonkit {
namespace oracles {

namespace {

const char kB64Alphabet[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

}  // namespace

std::string base64_encode(const std::vector<float>& values) {
  std::vector<unsigned char> bytes(values.size() * 4);
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::uint32_t bits;
    std::memcpy(&bits, &values[i], 4);
    bytes[i * 4 + 0] = static_cast<unsigned char>(bits & 0xff);
    bytes[i * 4 + 1] = static_cast<unsigned char>((bits >> 8) & 0xff);
    bytes[i * 4 + 2] = static_cast<unsigned char>((bits >> 16) & 0xff);
    bytes[i * 4 + 3] = static_cast<unsigned char>((bits >> 24) & 0xff);
  }
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  for (std::size_t i = 0; i < bytes.size(); i += 3) {
    std::uint32_t chunk = static_cast<std::uint32_t>(bytes[i]) << 16;
    if (i + 1 < bytes.size()) chunk |= static_cast<std::uint32_t>(bytes[i + 1]) << 8;
    if (i + 2 < bytes.size()) chunk |= bytes[i + 2];
    out.push_back(kB64Alphabet[(chunk >> 18) & 0x3f]);
    out.push_back(kB64Alphabet[(chunk >> 12) & 0x3f]);
    out.push_back(i + 1 < bytes.size() ? kB64Alphabet[(chunk >> 6) & 0x3f] : '=');
    out.push_back(i + 2 < bytes.size() ? kB64Alphabet[chunk & 0x3f] : '=');
  }
  return out;
}

std::vector<float> base64_decode_floats(const std::string& text) {
  static int lookup[256];
  static bool init = [] {
    std::fill(std::begin(lookup), std::end(lookup), -1);
    for (int i = 0; i < 64; ++i) {
      lookup[static_cast<unsigned char>(kB64Alphabet[i])] = i;
    }
    return true;
  }();
  (void)init;

  std::vector<unsigned char> bytes;
  bytes.reserve(text.size() / 4 * 3);
  std::uint32_t chunk = 0;
  int have = 0;
  for (char c : text) {
    if (c == '=' || c == '\n' || c == '\r') continue;
    const int v = lookup[static_cast<unsigned char>(c)];
    if (v < 0) throw PluginMalformed("base64: invalid character");
    chunk = (chunk << 6) | static_cast<std::uint32_t>(v);
    if (++have == 4) {
      bytes.push_back(static_cast<unsigned char>((chunk >> 16) & 0xff));
      bytes.push_back(static_cast<unsigned char>((chunk >> 8) & 0xff));
      bytes.push_back(static_cast<unsigned char>(chunk & 0xff));
      have = 0;
      chunk = 0;
    }
  }
  if (have == 2) {
    bytes.push_back(static_cast<unsigned char>((chunk >> 4) & 0xff));
  } else if (have == 3) {
    bytes.push_back(static_cast<unsigned char>((chunk >> 10) & 0xff));
    bytes.push_back(static_cast<unsigned char>((chunk >> 2) & 0xff));
  } else if (have != 0) {
    throw PluginMalformed("base64: truncated input");
  }
  if (bytes.size() % 4 != 0) {
    throw PluginMalformed("base64: payload is not a float32 array");
  }
  std::vector<float> values(bytes.size() / 4);
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::uint32_t bits = static_cast<std::uint32_t>(bytes[i * 4]) |
                         (static_cast<std::uint32_t>(bytes[i * 4 + 1]) << 8) |
                         (static_cast<std::uint32_t>(bytes[i * 4 + 2]) << 16) |
                         (static_cast<std::uint32_t>(bytes[i * 4 + 3]) << 24);
    std::memcpy(&values[i], &bits, 4);
  }
  return values;
}

struct PluginProcess::Impl {
  PluginConfig config;
  pid_t pid = -1;
  int write_fd = -1;
  int read_fd = -1;

  std::mutex mu;
  std::condition_variable cv;
  bool reader_active = false;
  std::uint64_t next_id = 1;
  std::map<std::uint64_t, std::string> responses;  // id -> raw line
  std::map<std::uint64_t, bool> pending;
  std::map<std::uint64_t, bool> abandoned;  // timed out; drop late replies
  std::string poison;  // non-empty once the protocol is broken
  std::string read_buffer;

  void launch() {
    int to_child[2];
    int from_child[2];
    if (pipe(to_child) != 0 || pipe(from_child) != 0) {
      throw PluginUnavailable("plugin: pipe() failed");
    }
    pid = fork();
    if (pid < 0) throw PluginUnavailable("plugin: fork() failed");
    if (pid == 0) {
      dup2(to_child[0], STDIN_FILENO);
      dup2(from_child[1], STDOUT_FILENO);
      close(to_child[0]);
      close(to_child[1]);
      close(from_child[0]);
      close(from_child[1]);
      std::vector<char*> argv;
      for (auto& arg : config.command) {
        argv.push_back(const_cast<char*>(arg.c_str()));
      }
      argv.push_back(nullptr);
      execvp(argv[0], argv.data());
      _exit(127);
    }
    close(to_child[0]);
    close(from_child[1]);
    write_fd = to_child[1];
    read_fd = from_child[0];
    // Writes to a dead child must surface as errors, not SIGPIPE.
    signal(SIGPIPE, SIG_IGN);
  }

  void shutdown() {
    if (write_fd >= 0) {
      close(write_fd);
      write_fd = -1;
    }
    if (read_fd >= 0) {
      close(read_fd);
      read_fd = -1;
    }
    if (pid > 0) {
      int status = 0;
      for (int i = 0; i < 20; ++i) {
        if (waitpid(pid, &status, WNOHANG) != 0) {
          pid = -1;
          return;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(50));
      }
      kill(pid, SIGKILL);
      waitpid(pid, &status, 0);
      pid = -1;
    }
  }

  // Reads whatever is available before `deadline`, splitting complete lines
  // into the response map. Returns false on timeout. Caller holds no lock.
  void read_into_map(std::chrono::steady_clock::time_point deadline) {
    const auto now = std::chrono::steady_clock::now();
    const auto remaining =
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now);
    if (remaining.count() <= 0) throw PluginTimeout("plugin: request timed out");

    struct pollfd pfd;
    pfd.fd = read_fd;
    pfd.events = POLLIN;
    const int rc = poll(&pfd, 1, static_cast<int>(remaining.count()));
    if (rc == 0) throw PluginTimeout("plugin: request timed out");
    if (rc < 0) throw PluginUnavailable("plugin: poll() failed");

    char buf[4096];
    const ssize_t n = read(read_fd, buf, sizeof buf);
    if (n <= 0) {
      throw PluginUnavailable("plugin: process closed its output stream");
    }

    std::lock_guard<std::mutex> lk(mu);
    read_buffer.append(buf, static_cast<std::size_t>(n));
    std::size_t pos;
    while ((pos = read_buffer.find('\n')) != std::string::npos) {
      std::string line = read_buffer.substr(0, pos);
      read_buffer.erase(0, pos + 1);
      if (line.empty()) continue;
      std::uint64_t id = 0;
      try {
        const auto j = nlohmann::json::parse(line);
        id = j.at("id").get<std::uint64_t>();
      } catch (const nlohmann::json::exception& e) {
        throw PluginMalformed(std::string("plugin: malformed response: ") +
                              e.what());
      }
      if (abandoned.count(id)) {
        abandoned.erase(id);  // late reply to a timed-out request
        continue;
      }
      if (!pending.count(id)) {
        throw PluginIdMismatch("plugin: response id " + std::to_string(id) +
                               " matches no outstanding request");
      }
      pending.erase(id);
      responses[id] = std::move(line);
    }
  }
};

PluginProcess::PluginProcess(PluginConfig config)
    : impl_(std::make_unique<Impl>()) {
  if (config.command.empty()) {
    throw ConfigError("plugin: empty command line");
  }
  impl_->config = std::move(config);
  impl_->launch();
}

PluginProcess::~PluginProcess() { impl_->shutdown(); }

bool PluginProcess::alive() const {
  if (impl_->pid <= 0) return false;
  return waitpid(impl_->pid, nullptr, WNOHANG) == 0;
}

std::string PluginProcess::request_response(const std::string& op,
                                            const audio::AudioClip& clip) {
  Impl& im = *impl_;

  std::vector<float> f32(clip.samples.size());
  for (std::size_t i = 0; i < f32.size(); ++i) {
    f32[i] = static_cast<float>(clip.samples[i]);
  }
  nlohmann::json payload;
  std::uint64_t id;
  {
    std::lock_guard<std::mutex> lk(im.mu);
    if (!im.poison.empty()) throw PluginUnavailable(im.poison);
    id = im.next_id++;
    im.pending[id] = true;
  }
  payload["id"] = id;
  payload["op"] = op;
  payload["sample_rate"] = clip.sample_rate;
  payload["samples_b64"] = base64_encode(f32);
  const std::string line = payload.dump() + "\n";

  {
    std::lock_guard<std::mutex> lk(im.mu);
    std::size_t written = 0;
    while (written < line.size()) {
      const ssize_t n =
          write(im.write_fd, line.data() + written, line.size() - written);
      if (n <= 0) {
        im.poison = "plugin: process is not accepting requests";
        im.pending.erase(id);
        throw PluginUnavailable(im.poison);
      }
      written += static_cast<std::size_t>(n);
    }
  }

  const auto deadline =
      std::chrono::steady_clock::now() +
      std::chrono::milliseconds(
          static_cast<long>(im.config.timeout_s * 1000.0));

  std::unique_lock<std::mutex> lk(im.mu);
  for (;;) {
    if (!im.poison.empty()) throw PluginUnavailable(im.poison);
    if (const auto it = im.responses.find(id); it != im.responses.end()) {
      std::string out = std::move(it->second);
      im.responses.erase(it);
      return out;
    }
    if (im.reader_active) {
      // Another caller is draining the pipe; responses arrive via the map.
      if (im.cv.wait_until(lk, deadline) == std::cv_status::timeout) {
        im.pending.erase(id);
        im.abandoned[id] = true;
        throw PluginTimeout("plugin: request timed out");
      }
      continue;
    }
    im.reader_active = true;
    lk.unlock();
    try {
      im.read_into_map(deadline);
    } catch (const OracleError& e) {
      lk.lock();
      im.reader_active = false;
      im.pending.erase(id);
      im.poison = e.what();
      im.cv.notify_all();
      throw;
    }
    lk.lock();
    im.reader_active = false;
    im.cv.notify_all();
  }
}

PluginClassifier::PluginClassifier(PluginConfig config,
                                   std::vector<std::string> labels)
    : process_(std::make_shared<PluginProcess>(std::move(config))),
      labels_(std::move(labels)) {}

ClassScores PluginClassifier::classify(const audio::AudioClip& clip) const {
  if (clip.empty()) throw OracleError("classify: empty clip");
  const std::string raw = process_->request_response("classify", clip);
  ClassScores scores;
  try {
    const auto j = nlohmann::json::parse(raw);
    for (const auto& [label, prob] : j.at("scores").items()) {
      scores.scores[label] = prob.get<double>();
      scores.labels.push_back(label);
    }
  } catch (const nlohmann::json::exception& e) {
    throw PluginMalformed(std::string("plugin classify response: ") +
                          e.what());
  }
  double sum = 0.0;
  for (const auto& [label, p] : scores.scores) {
    if (!std::isfinite(p) || p < 0.0) {
      throw PluginMalformed("plugin classify response: invalid probability");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-6) {
    throw PluginMalformed("plugin classify response: scores sum to " +
                          std::to_string(sum));
  }
  return scores;
}

PluginTranscriber::PluginTranscriber(PluginConfig config)
    : process_(std::make_shared<PluginProcess>(std::move(config))) {}

TranscriptResult PluginTranscriber::transcribe(
    const audio::AudioClip& clip, const std::string& /*utterance_id*/) const {
  if (clip.empty()) throw OracleError("transcribe: empty clip");
  const std::string raw = process_->request_response("transcribe", clip);
  TranscriptResult result;
  try {
    const auto j = nlohmann::json::parse(raw);
    result.tokens = normalize_transcript(j.at("transcript").get<std::string>());
    result.confidence = j.at("confidence").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw PluginMalformed(std::string("plugin transcribe response: ") +
                          e.what());
  }
  if (!std::isfinite(result.confidence) || result.confidence < 0.0 ||
      result.confidence > 1.0) {
    throw PluginMalformed("plugin transcribe response: confidence outside "
                          "[0, 1]");
  }
  return result;
}

}  // namespace oracles
}  // namespace eonkit
