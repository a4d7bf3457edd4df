// Copyright 2026 The lipcascade Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "lipcascade/training/checkpoint.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "lipcascade/error.hpp"

namespace lipcascade::training {
namespace {

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

constexpr char kOptimizerTag[8] = {'O', 'P', 'T', 'I', 'M', 'I', 'Z', 'R'};

class Writer {
 public:
  void bytes(const void* p, std::size_t n) {
    const auto* c = static_cast<const char*>(p);
    buf_.insert(buf_.end(), c, c + n);
  }
  template <typename T>
  void pod(T v) {
    bytes(&v, sizeof v);
  }
  void str32(const std::string& s) {
    pod<std::uint32_t>(static_cast<std::uint32_t>(s.size()));
    bytes(s.data(), s.size());
  }
  void record(const std::string& name, const num::Shape& shape,
              std::span<const double> values) {
    str32(name);
    pod<std::uint32_t>(static_cast<std::uint32_t>(shape.size()));
    for (auto d : shape) pod<std::uint64_t>(d);
    bytes(values.data(), values.size() * sizeof(double));
  }
  const std::vector<char>& buffer() const { return buf_; }

 private:
  std::vector<char> buf_;
};

class Reader {
 public:
  Reader(std::vector<char> data, std::string path) : data_(std::move(data)), path_(std::move(path)) {}

  void bytes(void* out, std::size_t n) {
    if (n > data_.size() - pos_) {
      throw FormatError(path_ + ": truncated at byte " + std::to_string(pos_));
    }
    std::memcpy(out, data_.data() + pos_, n);
    pos_ += n;
  }
  template <typename T>
  T pod() {
    T v;
    bytes(&v, sizeof v);
    return v;
  }
  std::string str(std::size_t n) {
    if (n > data_.size() - pos_) {
      throw FormatError(path_ + ": truncated at byte " + std::to_string(pos_));
    }
    std::string s(data_.data() + pos_, n);
    pos_ += n;
    return s;
  }
  std::string str32() { return str(pod<std::uint32_t>()); }
  std::string str64() { return str(pod<std::uint64_t>()); }
  ParamRecord record() {
    ParamRecord r;
    r.name = str32();
    const auto rank = pod<std::uint32_t>();
    if (rank > 8) throw FormatError(path_ + ": implausible rank for " + r.name);
    std::size_t count = 1;
    for (std::uint32_t i = 0; i < rank; ++i) {
      const auto d = pod<std::uint64_t>();
      r.shape.push_back(static_cast<std::size_t>(d));
      count *= static_cast<std::size_t>(d);
    }
    if (count > remaining() / sizeof(double)) {
      throw FormatError(path_ + ": truncated values for " + r.name);
    }
    r.values.resize(count);
    bytes(r.values.data(), count * sizeof(double));
    return r;
  }
  std::size_t remaining() const { return data_.size() - pos_; }
  bool at_end() const { return pos_ == data_.size(); }
  const std::string& path() const { return path_; }

 private:
  std::vector<char> data_;
  std::string path_;
  std::size_t pos_ = 0;
};

}  // namespace

Checkpoint make_checkpoint(std::span<const NamedTensor> params, const OptimizerState* optimizer,
                           std::string config_echo) {
  Checkpoint c;
  c.config_echo = std::move(config_echo);
  for (const auto& p : params) {
    const auto v = p.tensor.data();
    c.params.push_back({p.name, p.tensor.shape(), std::vector<double>(v.begin(), v.end())});
  }
  if (optimizer) c.optimizer = *optimizer;
  return c;
}

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint) {
  Writer w;
  w.bytes(kCheckpointMagic, sizeof kCheckpointMagic);
  w.pod<std::uint32_t>(kCheckpointVersion);
  w.pod<std::uint64_t>(checkpoint.config_echo.size());
  w.bytes(checkpoint.config_echo.data(), checkpoint.config_echo.size());
  w.pod<std::uint32_t>(static_cast<std::uint32_t>(checkpoint.params.size()));
  for (const auto& r : checkpoint.params) w.record(r.name, r.shape, r.values);
  if (checkpoint.optimizer) {
    const OptimizerState& s = *checkpoint.optimizer;
    w.bytes(kOptimizerTag, sizeof kOptimizerTag);
    w.pod<std::uint32_t>(s.kind == OptimizerKind::Adam ? 0u : 1u);
    w.pod<std::uint64_t>(s.step);
    w.pod<double>(s.beta1);
    w.pod<double>(s.beta2);
    w.pod<double>(s.epsilon);
    if (!s.m.empty() && s.m.size() != checkpoint.params.size()) {
      throw FormatError("optimizer moments do not match parameter count");
    }
    w.pod<std::uint32_t>(static_cast<std::uint32_t>(s.m.size()));
    for (std::size_t k = 0; k < s.m.size(); ++k) {
      const auto& name = checkpoint.params[k].name;
      w.record(name + "#m", {s.m[k].size()}, s.m[k]);
      w.record(name + "#v", {s.v[k].size()}, s.v[k]);
    }
  }

  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(w.buffer().data(), static_cast<std::streamsize>(w.buffer().size()));
    if (!out) throw IoError("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint " + path.string());
  std::vector<char> data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  Reader r(std::move(data), path.string());

  char magic[sizeof kCheckpointMagic];
  r.bytes(magic, sizeof magic);
  if (!std::equal(std::begin(magic), std::end(magic), std::begin(kCheckpointMagic))) {
    throw FormatError(path.string() + ": not a checkpoint file");
  }
  const auto version = r.pod<std::uint32_t>();
  if (version != kCheckpointVersion) {
    throw FormatError(path.string() + ": unsupported checkpoint version " +
                      std::to_string(version));
  }
  Checkpoint c;
  c.config_echo = r.str64();
  const auto count = r.pod<std::uint32_t>();
  for (std::uint32_t i = 0; i < count; ++i) c.params.push_back(r.record());
  if (!r.at_end()) {
    char tag[sizeof kOptimizerTag];
    r.bytes(tag, sizeof tag);
    if (!std::equal(std::begin(tag), std::end(tag), std::begin(kOptimizerTag))) {
      throw FormatError(path.string() + ": unknown section after parameters");
    }
    OptimizerState s;
    const auto kind = r.pod<std::uint32_t>();
    if (kind > 1) throw FormatError(path.string() + ": unknown optimizer kind");
    s.kind = kind == 0 ? OptimizerKind::Adam : OptimizerKind::Sgd;
    s.step = r.pod<std::uint64_t>();
    s.beta1 = r.pod<double>();
    s.beta2 = r.pod<double>();
    s.epsilon = r.pod<double>();
    const auto moments = r.pod<std::uint32_t>();
    if (moments != 0 && moments != count) {
      throw FormatError(path.string() + ": optimizer moment count mismatch");
    }
    for (std::uint32_t k = 0; k < moments; ++k) {
      ParamRecord m = r.record();
      ParamRecord v = r.record();
      if (m.values.size() != c.params[k].values.size() ||
          v.values.size() != c.params[k].values.size()) {
        throw FormatError(path.string() + ": moment size mismatch for " + c.params[k].name);
      }
      s.m.push_back(std::move(m.values));
      s.v.push_back(std::move(v.values));
    }
    c.optimizer = std::move(s);
  }
  if (!r.at_end()) throw FormatError(path.string() + ": trailing bytes");
  return c;
}

void save_checkpoint(const std::filesystem::path& path, std::span<const NamedTensor> params,
                     const OptimizerState* optimizer, const std::string& config_echo) {
  write_checkpoint(path, make_checkpoint(params, optimizer, config_echo));
}

void load_parameters(const Checkpoint& checkpoint, std::span<const NamedTensor> params) {
  if (checkpoint.params.size() != params.size()) {
    throw FormatError("checkpoint has " + std::to_string(checkpoint.params.size()) +
                      " parameters, model has " + std::to_string(params.size()));
  }
  for (std::size_t k = 0; k < params.size(); ++k) {
    const ParamRecord& r = checkpoint.params[k];
    if (r.name != params[k].name || r.shape != params[k].tensor.shape()) {
      throw FormatError("checkpoint parameter " + r.name + " " + num::to_string(r.shape) +
                        " does not match model parameter " + params[k].name + " " +
                        num::to_string(params[k].tensor.shape()));
    }
  }
  for (std::size_t k = 0; k < params.size(); ++k) {
    Tensor t = params[k].tensor;
    std::copy(checkpoint.params[k].values.begin(), checkpoint.params[k].values.end(),
              t.data().begin());
  }
}

}  // namespace lipcascade::training
