#pragma once

// In-memory duplex stream pair and a wire-capture wrapper for tunnel tests.

#include <condition_variable>
#include <deque>
#include <memory>
#include <mutex>

#include "qpp/tunnel.hpp"

namespace qpp::testing {

class PipeBuffer {
 public:
  void write(const uint8_t* data, size_t len) {
    std::lock_guard<std::mutex> lock(mutex_);
    buffer_.insert(buffer_.end(), data, data + len);
    cv_.notify_all();
  }

  size_t read(uint8_t* out, size_t len) {
    std::unique_lock<std::mutex> lock(mutex_);
    cv_.wait(lock, [&] { return !buffer_.empty() || closed_; });
    if (buffer_.empty()) return 0;
    size_t n = std::min(len, buffer_.size());
    std::copy(buffer_.begin(), buffer_.begin() + n, out);
    buffer_.erase(buffer_.begin(), buffer_.begin() + n);
    return n;
  }

  void close() {
    std::lock_guard<std::mutex> lock(mutex_);
    closed_ = true;
    cv_.notify_all();
  }

 private:
  std::mutex mutex_;
  std::condition_variable cv_;
  std::deque<uint8_t> buffer_;
  bool closed_ = false;
};

class PipeEnd : public WireStream {
 public:
  PipeEnd(std::shared_ptr<PipeBuffer> in, std::shared_ptr<PipeBuffer> out)
      : in_(std::move(in)), out_(std::move(out)) {}
  ~PipeEnd() override { out_->close(); }

  size_t read_some(uint8_t* buf, size_t len) override { return in_->read(buf, len); }
  void write_all(const uint8_t* buf, size_t len) override { out_->write(buf, len); }

 private:
  std::shared_ptr<PipeBuffer> in_;
  std::shared_ptr<PipeBuffer> out_;
};

inline std::pair<std::unique_ptr<PipeEnd>, std::unique_ptr<PipeEnd>> make_pipe() {
  auto a_to_b = std::make_shared<PipeBuffer>();
  auto b_to_a = std::make_shared<PipeBuffer>();
  return {std::make_unique<PipeEnd>(b_to_a, a_to_b),
          std::make_unique<PipeEnd>(a_to_b, b_to_a)};
}

// Records every byte passing through in either direction.
class CaptureWireStream : public WireStream {
 public:
  explicit CaptureWireStream(WireStream& inner) : inner_(inner) {}

  size_t read_some(uint8_t* buf, size_t len) override {
    size_t n = inner_.read_some(buf, len);
    std::lock_guard<std::mutex> lock(mutex_);
    captured_.insert(captured_.end(), buf, buf + n);
    return n;
  }

  void write_all(const uint8_t* buf, size_t len) override {
    {
      std::lock_guard<std::mutex> lock(mutex_);
      captured_.insert(captured_.end(), buf, buf + len);
    }
    inner_.write_all(buf, len);
  }

  Bytes captured() {
    std::lock_guard<std::mutex> lock(mutex_);
    return captured_;
  }

 private:
  WireStream& inner_;
  std::mutex mutex_;
  Bytes captured_;
};

// Source over a fixed buffer and sink into a growing one.
inline TunnelSource buffer_source(std::shared_ptr<Bytes> data) {
  auto offset = std::make_shared<size_t>(0);
  return [data, offset](uint8_t* buf, size_t len) -> size_t {
    size_t n = std::min(len, data->size() - *offset);
    std::copy(data->begin() + *offset, data->begin() + *offset + n, buf);
    *offset += n;
    return n;
  };
}

inline TunnelSink buffer_sink(std::shared_ptr<Bytes> out) {
  return [out](const uint8_t* data, size_t len) {
    out->insert(out->end(), data, data + len);
  };
}

inline TunnelSource empty_source() {
  return [](uint8_t*, size_t) -> size_t { return 0; };
}

}  // namespace qpp::testing
