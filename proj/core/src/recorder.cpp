// Copyright 2026 The SessionForge Authors
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

#include "sessionforge/recorder.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <algorithm>
#include <cerrno>
#include <cmath>
#include <condition_variable>
#include <cstring>
#include <deque>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>
#include <variant>

#include "sessionforge/error.hpp"

namespace sessionforge {

namespace {

constexpr int kPollMillis = 50;

using Event = std::variant<wire::TcpFrame, wire::AudioDatagram>;

void set_nonblocking(int fd) {
  const int flags = ::fcntl(fd, F_GETFL, 0);
  ::fcntl(fd, F_SETFL, flags | O_NONBLOCK);
}

[[noreturn]] void bind_error(const std::string& what) {
  throw Error(module_name::kTransport, "BindError", what + ": " + std::strerror(errno));
}

sockaddr_in make_address(const std::string& host, std::uint16_t port) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    throw Error(module_name::kTransport, "BindError", "invalid bind address '" + host + "'");
  }
  return addr;
}

std::uint16_t bound_port(int fd) {
  sockaddr_in addr{};
  socklen_t len = sizeof addr;
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  return ntohs(addr.sin_port);
}

}  // namespace

struct RecordingHandle::State {
  RecorderConfig config;
  std::string created_at;
  int listen_fd = -1;
  int udp_fd = -1;
  std::uint16_t tcp_port = 0;
  std::optional<std::uint16_t> udp_port;

  std::atomic<bool> stopping{false};
  std::thread acceptor;
  std::thread udp_receiver;
  std::thread writer;
  std::mutex receivers_mu;
  std::vector<std::thread> receivers;

  // Merged queue feeding the single writer.
  std::mutex queue_mu;
  std::condition_variable queue_not_empty;
  std::condition_variable queue_not_full;
  std::deque<Event> queue;
  bool producers_done = false;

  // Owned by the writer thread until it is joined.
  std::map<std::string, TimedSeries> numeric;
  std::map<std::string, FrameTimestampLog> video;
  std::map<std::string, StreamDescriptor> topic_streams;  // by topic
  std::vector<std::string> auto_topics;
  std::vector<wire::AudioDatagram> datagrams;
  std::vector<std::string> sink_warnings;

  mutable std::mutex stats_mu;
  RecorderStats stats;

  std::mutex stop_mu;
  bool stop_done = false;
  RawSession result;
  std::vector<std::string> warnings;
  wire::GapReport gaps;
  std::exception_ptr stop_error;

  ~State() {
    if (!stop_done) {
      stopping = true;
      if (acceptor.joinable()) acceptor.join();
      {
        std::lock_guard lock(receivers_mu);
        for (auto& t : receivers) {
          if (t.joinable()) t.join();
        }
      }
      if (udp_receiver.joinable()) udp_receiver.join();
      {
        std::lock_guard lock(queue_mu);
        producers_done = true;
      }
      queue_not_empty.notify_all();
      if (writer.joinable()) writer.join();
    }
    if (listen_fd >= 0) ::close(listen_fd);
    if (udp_fd >= 0) ::close(udp_fd);
  }

  void push(Event event) {
    std::unique_lock lock(queue_mu);
    queue_not_full.wait(lock, [&] { return queue.size() < config.high_water_mark; });
    queue.push_back(std::move(event));
    lock.unlock();
    queue_not_empty.notify_one();
  }

  void count(std::size_t RecorderStats::*field) {
    std::lock_guard lock(stats_mu);
    ++(stats.*field);
  }

  struct Inbox {
    wire::Bytes buffer;
    std::size_t offset = 0;
    std::size_t skip = 0;  // bytes of an already-counted malformed frame still to drop
  };

  // Decodes every complete frame in the inbox. Returns false when the stream
  // cannot be resynchronised and the connection must be dropped.
  bool consume(Inbox& in) {
    while (in.offset < in.buffer.size()) {
      if (in.skip > 0) {
        const std::size_t n = std::min(in.skip, in.buffer.size() - in.offset);
        in.offset += n;
        in.skip -= n;
        continue;
      }
      std::span<const std::uint8_t> view(in.buffer.data() + in.offset,
                                         in.buffer.size() - in.offset);
      try {
        auto result = wire::frame_decode(view);
        if (std::holds_alternative<wire::NeedMoreBytes>(result)) break;
        auto& decoded = std::get<wire::Decoded>(result);
        in.offset += decoded.consumed;
        push(std::move(decoded.frame));
      } catch (const Error&) {
        count(&RecorderStats::frames_malformed);
        auto skip = wire::skippable_length(view);
        if (!skip) return false;
        in.skip = *skip;
      }
    }
    if (in.offset > 0 && in.offset * 2 >= in.buffer.size()) {
      in.buffer.erase(in.buffer.begin(), in.buffer.begin() + static_cast<std::ptrdiff_t>(in.offset));
      in.offset = 0;
    }
    return true;
  }

  void receive_tcp(int fd) {
    Inbox inbox;
    std::uint8_t chunk[64 * 1024];
    bool draining = false;
    while (true) {
      if (!draining && stopping) {
        draining = true;
        set_nonblocking(fd);
      }
      if (!draining) {
        pollfd p{fd, POLLIN, 0};
        const int ready = ::poll(&p, 1, kPollMillis);
        if (ready == 0) continue;
        if (ready < 0 && errno == EINTR) continue;
      }
      const ssize_t n = ::recv(fd, chunk, sizeof chunk, 0);
      if (n == 0) break;
      if (n < 0) {
        if (errno == EINTR) continue;
        if (errno == EAGAIN || errno == EWOULDBLOCK) {
          if (draining) break;
          continue;
        }
        break;
      }
      inbox.buffer.insert(inbox.buffer.end(), chunk, chunk + n);
      if (!consume(inbox)) break;
    }
    ::close(fd);
  }

  void accept_one(int fd) {
    {
      std::lock_guard lock(stats_mu);
      ++stats.connections;
    }
    std::lock_guard lock(receivers_mu);
    receivers.emplace_back([this, fd] { receive_tcp(fd); });
  }

  void accept_loop() {
    while (!stopping) {
      pollfd p{listen_fd, POLLIN, 0};
      const int ready = ::poll(&p, 1, kPollMillis);
      if (ready <= 0) continue;
      const int fd = ::accept(listen_fd, nullptr, nullptr);
      if (fd >= 0) accept_one(fd);
    }
    // Connections still queued in the backlog are drained too.
    set_nonblocking(listen_fd);
    while (true) {
      const int fd = ::accept(listen_fd, nullptr, nullptr);
      if (fd < 0) break;
      accept_one(fd);
    }
  }

  void udp_loop() {
    std::vector<std::uint8_t> buffer(65536);
    bool draining = false;
    while (true) {
      if (!draining && stopping) {
        draining = true;
        set_nonblocking(udp_fd);
      }
      if (!draining) {
        pollfd p{udp_fd, POLLIN, 0};
        const int ready = ::poll(&p, 1, kPollMillis);
        if (ready <= 0) continue;
      }
      const ssize_t n = ::recv(udp_fd, buffer.data(), buffer.size(), 0);
      if (n < 0) {
        if (errno == EINTR) continue;
        if (draining) break;
        continue;
      }
      try {
        push(wire::decode_datagram({buffer.data(), static_cast<std::size_t>(n)}));
      } catch (const Error&) {
        count(&RecorderStats::datagrams_malformed);
      }
    }
  }

  void record_frame(wire::TcpFrame& frame) {
    auto it = topic_streams.find(frame.topic);
    if (it == topic_streams.end()) {
      StreamDescriptor d;
      d.name = frame.topic;
      d.kind = StreamKind::Numeric;
      d.nominal_rate = 1.0;
      for (std::size_t c = 0; c < frame.values.size(); ++c) {
        d.channels.push_back({"c" + std::to_string(c), "1"});
      }
      d.file = "streams/" + d.name + ".csv";
      if (d.channels.empty()) d.channels.push_back({"c0", "1"});
      sink_warnings.push_back("topic '" + frame.topic +
                              "' not in stream map; recorded as numeric with generic channels");
      auto_topics.push_back(frame.topic);
      it = topic_streams.emplace(frame.topic, d).first;
      numeric.emplace(d.name, TimedSeries(d.channels));
    }
    const StreamDescriptor& d = it->second;
    bool ok = false;
    if (d.kind == StreamKind::VideoFrames) {
      auto& log = video[d.name];
      log.stream = d.name;
      if (log.timestamps.empty() || frame.timestamp > log.timestamps.back()) {
        log.timestamps.push_back(frame.timestamp);
        ok = true;
      }
    } else if (d.kind == StreamKind::Numeric) {
      auto& series = numeric[d.name];
      if (frame.values.size() == series.channel_count() &&
          (series.empty() || frame.timestamp > series.timestamps.back())) {
        series.append(frame.timestamp, frame.values);
        ok = true;
      }
    }
    std::lock_guard lock(stats_mu);
    if (ok) {
      ++stats.frames_recorded;
      ++stats.frames_per_topic[frame.topic];
    } else {
      ++stats.frames_rejected;
    }
  }

  void write_loop() {
    while (true) {
      std::unique_lock lock(queue_mu);
      queue_not_empty.wait(lock, [&] { return !queue.empty() || producers_done; });
      if (queue.empty()) return;
      Event event = std::move(queue.front());
      queue.pop_front();
      lock.unlock();
      queue_not_full.notify_one();
      if (auto* frame = std::get_if<wire::TcpFrame>(&event)) {
        record_frame(*frame);
      } else {
        datagrams.push_back(std::move(std::get<wire::AudioDatagram>(event)));
        count(&RecorderStats::datagrams_received);
      }
    }
  }

  RawSession build_session() {
    RawSession session;
    session.manifest = config.manifest_template;
    session.manifest.created_at = created_at;
    session.manifest.streams.clear();
    for (const auto& [topic, d] : topic_streams) {
      if (std::find(auto_topics.begin(), auto_topics.end(), topic) != auto_topics.end()) continue;
      session.manifest.streams.push_back(d);
    }
    for (const auto& topic : auto_topics) session.manifest.streams.push_back(topic_streams.at(topic));

    for (const auto& d : session.manifest.streams) {
      if (d.kind == StreamKind::Numeric) {
        auto it = numeric.find(d.name);
        session.numeric[d.name] = it != numeric.end() ? it->second : TimedSeries(d.channels);
      } else if (d.kind == StreamKind::VideoFrames) {
        auto it = video.find(d.name);
        session.video[d.name] =
            it != video.end() ? it->second : FrameTimestampLog{d.name, {}};
      }
    }

    if (config.rebase_time) {
      double t0 = std::numeric_limits<double>::infinity();
      for (const auto& [_, s] : session.numeric) {
        if (!s.empty()) t0 = std::min(t0, s.timestamps.front());
      }
      for (const auto& [_, v] : session.video) {
        if (!v.timestamps.empty()) t0 = std::min(t0, v.timestamps.front());
      }
      if (std::isfinite(t0) && t0 != 0.0) {
        for (auto& [_, s] : session.numeric) {
          for (double& t : s.timestamps) t -= t0;
        }
        for (auto& [_, v] : session.video) {
          for (double& t : v.timestamps) t -= t0;
        }
      }
    }

    if (udp_port) {
      StreamDescriptor d;
      d.name = config.audio_stream;
      d.kind = StreamKind::Audio;
      d.nominal_rate = config.audio_sample_rate;
      d.channels = {{"pcm", "1"}};
      d.file = "audio/" + d.name + ".wav";
      session.manifest.streams.push_back(d);
      wire::ReassemblyOptions options;
      options.stream = d.name;
      if (!datagrams.empty()) {
        std::uint32_t first = datagrams.front().sequence;
        for (const auto& g : datagrams) first = std::min(first, g.sequence);
        if (first != 0) {
          sink_warnings.push_back("audio sequence numbers start at " + std::to_string(first));
        }
      }
      auto reassembled = wire::audio_reassemble(datagrams, options);
      gaps = reassembled.gaps;
      if (gaps.missing_count() > 0) {
        sink_warnings.push_back("audio: " + std::to_string(gaps.missing_count()) +
                                " datagram(s) lost and zero-filled");
      }
      AudioTrack track;
      track.meta.sample_rate = config.audio_sample_rate;
      track.meta.file = d.file;
      track.samples = std::move(reassembled.pcm);
      session.audio[d.name] = std::move(track);
    }

    const std::size_t recorded = stats.frames_recorded;
    if (recorded == 0 && datagrams.empty()) sink_warnings.push_back("no frames received");
    if (stats.frames_malformed > 0) {
      sink_warnings.push_back(std::to_string(stats.frames_malformed) + " malformed frame(s) skipped");
    }
    if (stats.frames_rejected > 0) {
      sink_warnings.push_back(std::to_string(stats.frames_rejected) +
                              " frame(s) rejected (channel width or non-increasing timestamp)");
    }
    return session;
  }
};

std::uint16_t RecordingHandle::tcp_port() const { return state_->tcp_port; }

std::optional<std::uint16_t> RecordingHandle::udp_port() const { return state_->udp_port; }

RecorderStats RecordingHandle::stats() const {
  std::lock_guard lock(state_->stats_mu);
  return state_->stats;
}

bool RecordingHandle::stopped() const {
  std::lock_guard lock(state_->stop_mu);
  return state_->stop_done;
}

RawSession RecordingHandle::stop() {
  State& s = *state_;
  std::lock_guard stop_lock(s.stop_mu);
  if (!s.stop_done) {
    s.stopping = true;
    if (s.acceptor.joinable()) s.acceptor.join();
    {
      std::lock_guard lock(s.receivers_mu);
      for (auto& t : s.receivers) t.join();
      s.receivers.clear();
    }
    if (s.udp_receiver.joinable()) s.udp_receiver.join();
    {
      std::lock_guard lock(s.queue_mu);
      s.producers_done = true;
    }
    s.queue_not_empty.notify_all();
    if (s.writer.joinable()) s.writer.join();
    s.stop_done = true;
    try {
      s.result = s.build_session();
      s.warnings = s.sink_warnings;
      save_session(s.result, s.config.session_root);
    } catch (...) {
      s.stop_error = std::current_exception();
    }
  }
  if (s.stop_error) std::rethrow_exception(s.stop_error);
  return s.result;
}

std::vector<std::string> RecordingHandle::warnings() const {
  std::lock_guard lock(state_->stop_mu);
  return state_->warnings;
}

wire::GapReport RecordingHandle::audio_gaps() const {
  std::lock_guard lock(state_->stop_mu);
  return state_->gaps;
}

RecordingHandle start_recording(const RecorderConfig& config) {
  auto state = std::make_shared<RecordingHandle::State>();
  state->config = config;
  if (state->config.high_water_mark == 0) state->config.high_water_mark = 1;
  state->created_at = utc_now_iso8601();
  for (const auto& [topic, d] : config.streams) {
    StreamDescriptor desc = d;
    if (desc.name.empty()) desc.name = topic;
    if (desc.file.empty()) {
      desc.file = desc.kind == StreamKind::VideoFrames ? "video/" + desc.name + ".avi"
                                                       : "streams/" + desc.name + ".csv";
    }
    if (desc.kind == StreamKind::Numeric) state->numeric.emplace(desc.name, TimedSeries(desc.channels));
    state->topic_streams.emplace(topic, std::move(desc));
  }

  state->listen_fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (state->listen_fd < 0) bind_error("socket(tcp)");
  const int one = 1;
  ::setsockopt(state->listen_fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  auto tcp_addr = make_address(config.bind_address, config.tcp_port);
  if (::bind(state->listen_fd, reinterpret_cast<sockaddr*>(&tcp_addr), sizeof tcp_addr) != 0) {
    bind_error("bind tcp port " + std::to_string(config.tcp_port));
  }
  if (::listen(state->listen_fd, 64) != 0) bind_error("listen");
  state->tcp_port = bound_port(state->listen_fd);

  if (config.udp_port) {
    state->udp_fd = ::socket(AF_INET, SOCK_DGRAM, 0);
    if (state->udp_fd < 0) bind_error("socket(udp)");
    const int rcvbuf = 8 << 20;
    ::setsockopt(state->udp_fd, SOL_SOCKET, SO_RCVBUF, &rcvbuf, sizeof rcvbuf);
    auto udp_addr = make_address(config.bind_address, *config.udp_port);
    if (::bind(state->udp_fd, reinterpret_cast<sockaddr*>(&udp_addr), sizeof udp_addr) != 0) {
      bind_error("bind udp port " + std::to_string(*config.udp_port));
    }
    state->udp_port = bound_port(state->udp_fd);
  }

  RecordingHandle::State* raw = state.get();
  state->writer = std::thread([raw] { raw->write_loop(); });
  state->acceptor = std::thread([raw] { raw->accept_loop(); });
  if (state->udp_fd >= 0) state->udp_receiver = std::thread([raw] { raw->udp_loop(); });
  return RecordingHandle(std::move(state));
}

}  // namespace sessionforge
