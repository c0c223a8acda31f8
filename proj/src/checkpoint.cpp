// Copyright 2026 The hldsim Authors
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

#include "hldsim/checkpoint.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

namespace hldsim {

namespace {

constexpr const char* kMagic = "hldsim-checkpoint";
constexpr int kVersion = 1;
constexpr const char* kTensorNames[6] = {"w1", "b1", "w2", "b2", "wout", "bout"};

[[noreturn]] void bad(const std::string& what) {
  throw CheckpointError(CheckpointError::Kind::kFormat, "checkpoint: " + what);
}

std::span<const double> tensor(const Params& p, int t) {
  switch (t) {
    case 0:
      return p.w1();
    case 1:
      return p.b1();
    case 2:
      return p.w2();
    case 3:
      return p.b2();
    case 4:
      return p.wout();
    default:
      return p.bout();
  }
}

std::span<double> tensor(Params& p, int t) {
  switch (t) {
    case 0:
      return p.w1();
    case 1:
      return p.b1();
    case 2:
      return p.w2();
    case 3:
      return p.b2();
    case 4:
      return p.wout();
    default:
      return p.bout();
  }
}

std::vector<int32_t>& codes(QuantizedWeights& q, int t) {
  std::vector<int32_t>* all[6] = {&q.w1, &q.b1, &q.w2, &q.b2, &q.wout, &q.bout};
  return *all[t];
}

const std::vector<int32_t>& codes(const QuantizedWeights& q, int t) {
  const std::vector<int32_t>* all[6] = {&q.w1, &q.b1, &q.w2, &q.b2, &q.wout, &q.bout};
  return *all[t];
}

void write_floats(std::ostream& os, const char* group, const Params& p) {
  char buf[64];
  for (int t = 0; t < 6; ++t) {
    const auto v = tensor(p, t);
    os << group << ' ' << kTensorNames[t] << ' ' << v.size();
    for (double x : v) {
      std::snprintf(buf, sizeof buf, "%a", x);
      os << ' ' << buf;
    }
    os << '\n';
  }
}

double parse_double(const std::string& tok) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0' || errno == ERANGE || !std::isfinite(v)) {
    bad("invalid number '" + tok + "'");
  }
  return v;
}

int64_t parse_int(const std::string& tok) {
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(tok.c_str(), &end, 10);
  if (end == tok.c_str() || *end != '\0' || errno == ERANGE) bad("invalid integer '" + tok + "'");
  return v;
}

}  // namespace

Weights Checkpoint::float_weights() const {
  if (weights) return *weights;
  if (quantized) return dequantize(cfg, *quantized);
  throw CheckpointError(CheckpointError::Kind::kFormat, "checkpoint holds no weights");
}

std::string serialize_checkpoint(const Checkpoint& ckpt) {
  ckpt.cfg.validate();
  if (!ckpt.weights && !ckpt.quantized) bad("nothing to save");
  if (ckpt.quantized && !ckpt.cfg.quant) bad("quantized weights without a bit width");
  std::ostringstream os;
  os << kMagic << ' ' << kVersion << '\n';
  os << "distance " << ckpt.cfg.d << '\n';
  os << "n1 " << ckpt.cfg.n1 << '\n';
  os << "n2 " << ckpt.cfg.n2 << '\n';
  os << "transfer " << to_string(ckpt.cfg.transfer) << '\n';
  os << "rotated " << (ckpt.cfg.rotated ? 1 : 0) << '\n';
  if (ckpt.cfg.quant) {
    os << "bits " << ckpt.cfg.quant->bits << '\n';
    os << "extra_sample_bit " << (ckpt.cfg.quant->extra_sample_bit ? 1 : 0) << '\n';
  } else {
    os << "bits none\n";
    os << "extra_sample_bit 0\n";
  }
  os << "samples_seen " << ckpt.samples_seen << '\n';
  if (ckpt.weights) write_floats(os, "float", *ckpt.weights);
  if (ckpt.base) write_floats(os, "base", *ckpt.base);
  if (ckpt.quantized) {
    for (int t = 0; t < 6; ++t) {
      const auto& v = codes(*ckpt.quantized, t);
      os << "code " << kTensorNames[t] << ' ' << v.size();
      for (int32_t k : v) os << ' ' << k;
      os << '\n';
    }
  }
  os << "end\n";
  return os.str();
}

Checkpoint parse_checkpoint(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  auto next_line = [&](const char* expect) -> std::vector<std::string> {
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::istringstream ls(line);
      std::vector<std::string> toks;
      for (std::string tok; ls >> tok;) toks.push_back(tok);
      if (toks.empty()) continue;
      return toks;
    }
    bad(std::string("unexpected end of file, expected ") + expect);
  };
  auto field = [&](const char* key) {
    const auto toks = next_line(key);
    if (toks.size() != 2 || toks[0] != key) bad(std::string("expected '") + key + " <value>'");
    return toks[1];
  };

  const auto head = next_line(kMagic);
  if (head.size() != 2 || head[0] != kMagic) bad("missing header");
  if (parse_int(head[1]) != kVersion) bad("unsupported version " + head[1]);

  Checkpoint ck;
  ck.cfg.d = static_cast<int>(parse_int(field("distance")));
  ck.cfg.n1 = static_cast<int>(parse_int(field("n1")));
  ck.cfg.n2 = static_cast<int>(parse_int(field("n2")));
  try {
    ck.cfg.transfer = parse_transfer(field("transfer"));
  } catch (const std::invalid_argument& e) {
    bad(e.what());
  }
  const int64_t rotated = parse_int(field("rotated"));
  if (rotated != 0 && rotated != 1) bad("rotated must be 0 or 1");
  ck.cfg.rotated = rotated == 1;
  const std::string bits = field("bits");
  const int64_t extra = parse_int(field("extra_sample_bit"));
  if (extra != 0 && extra != 1) bad("extra_sample_bit must be 0 or 1");
  if (bits != "none") {
    ck.cfg.quant = QuantSpec{static_cast<int>(parse_int(bits)), extra == 1};
  }
  try {
    ck.cfg.validate();
  } catch (const std::invalid_argument& e) {
    bad(e.what());
  }
  ck.samples_seen = parse_int(field("samples_seen"));

  const TensorSizes full = full_sizes(ck.cfg);
  const TensorSizes base = ck.cfg.rotated ? base_sizes(ck.cfg) : TensorSizes{};
  auto expected = [](const TensorSizes& s, int t) {
    const std::size_t n[6] = {s.w1, s.b1, s.w2, s.b2, s.wout, s.bout};
    return n[t];
  };

  for (;;) {
    const auto toks = next_line("'end'");
    if (toks[0] == "end") break;
    const std::string& group = toks[0];
    if (group != "float" && group != "base" && group != "code") bad("unknown record '" + group + "'");
    for (int t = 0; t < 6; ++t) {
      const auto& row = t == 0 ? toks : next_line("tensor");
      if (row.size() < 3 || row[0] != group || row[1] != kTensorNames[t]) {
        bad("expected " + group + " " + kTensorNames[t]);
      }
      const TensorSizes& sizes = group == "base" ? base : full;
      if (group == "base" && !ck.cfg.rotated) bad("base weights in an unrotated network");
      const auto count = static_cast<std::size_t>(parse_int(row[2]));
      if (count != expected(sizes, t) || row.size() != count + 3) {
        bad(group + " " + kTensorNames[t] + " has the wrong length");
      }
      if (group == "code") {
        if (!ck.cfg.quant) bad("codes in a float network");
        if (t == 0) {
          if (ck.quantized) bad("duplicate code group");
          ck.quantized = QuantizedWeights{*ck.cfg.quant, full, {}, {}, {}, {}, {}, {}};
        }
        const int64_t lim = int64_t{1} << ck.cfg.quant->frac_bits();
        auto& dst = codes(*ck.quantized, t);
        for (std::size_t i = 0; i < count; ++i) {
          const int64_t k = parse_int(row[i + 3]);
          if (k < -lim || k >= lim) bad("code out of range");
          dst.push_back(static_cast<int32_t>(k));
        }
      } else {
        Params* dst = nullptr;
        if (group == "float") {
          if (t == 0) {
            if (ck.weights) bad("duplicate float group");
            ck.weights = Weights(ck.cfg);
          }
          dst = &*ck.weights;
        } else {
          if (t == 0) {
            if (ck.base) bad("duplicate base group");
            ck.base = BaseWeights(ck.cfg);
          }
          dst = &*ck.base;
        }
        auto v = tensor(*dst, t);
        for (std::size_t i = 0; i < count; ++i) v[i] = parse_double(row[i + 3]);
      }
    }
  }
  if (!ck.weights && !ck.quantized) bad("no weights");
  return ck;
}

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
  const std::string text = serialize_checkpoint(ckpt);
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CheckpointError(CheckpointError::Kind::kIo, "cannot write " + tmp);
    out << text;
    if (!out.flush()) throw CheckpointError(CheckpointError::Kind::kIo, "cannot write " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw CheckpointError(CheckpointError::Kind::kIo, "cannot write " + path + ": " + ec.message());
}

Checkpoint load_checkpoint(const std::string& path) {
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) {
    throw CheckpointError(CheckpointError::Kind::kNotFound, "checkpoint not found: " + path);
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError(CheckpointError::Kind::kIo, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_checkpoint(ss.str());
}

}  // namespace hldsim
