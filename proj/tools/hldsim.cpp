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

// hldsim command-line driver. Talks to the library through the C API only.

#include <algorithm>
#include <charconv>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "CLI11.hpp"
#include "hldsim/hldsim.h"
#include "json.hpp"

namespace {

// Exit statuses, one per failure kind.
enum Exit : int {
  kOk = 0,
  kRuntime = 1,
  kUsage = 2,
  kBadConfig = 3,
  kMissingInput = 4,
  kBadValue = 5,
  kNoResult = 6,
  kWriteFailed = 7,
};

struct CliError : std::runtime_error {
  CliError(int code, const std::string& what) : std::runtime_error(what), code(code) {}
  int code;
};

int exit_for(hldsim_status st) {
  switch (st) {
    case HLDSIM_OK:
      return kOk;
    case HLDSIM_ERR_INVALID_ARGUMENT:
    case HLDSIM_ERR_BUFFER_TOO_SMALL:
      return kBadValue;
    case HLDSIM_ERR_NOT_FOUND:
      return kMissingInput;
    case HLDSIM_ERR_IO:
      return kWriteFailed;
    case HLDSIM_ERR_FORMAT:
      return kBadConfig;
    case HLDSIM_ERR_NO_CROSSING:
    case HLDSIM_ERR_NOT_CONVERGED:
      return kNoResult;
    default:
      return kRuntime;
  }
}

void check(hldsim_status st) {
  if (st != HLDSIM_OK) throw CliError(exit_for(st), hldsim_last_error());
}

struct LayoutDeleter {
  void operator()(hldsim_layout* p) const { hldsim_layout_destroy(p); }
};
struct NetworkDeleter {
  void operator()(hldsim_network* p) const { hldsim_network_destroy(p); }
};
struct DecoderDeleter {
  void operator()(hldsim_decoder* p) const { hldsim_decoder_destroy(p); }
};
using LayoutPtr = std::unique_ptr<hldsim_layout, LayoutDeleter>;
using NetworkPtr = std::unique_ptr<hldsim_network, NetworkDeleter>;
using DecoderPtr = std::unique_ptr<hldsim_decoder, DecoderDeleter>;

NetworkPtr load_network(const std::string& path) {
  if (path.empty()) throw CliError(kMissingInput, "a checkpoint is required (--checkpoint)");
  hldsim_network* net = nullptr;
  check(hldsim_network_load(path.c_str(), &net));
  return NetworkPtr(net);
}

// Shortest text that parses back to the same double.
std::string fmt(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

uint64_t fnv1a(const std::string& text) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
  return buf;
}

// ---------------------------------------------------------------------------
// Options. Everything lives on the top-level app so one flat config file can
// drive any subcommand.

struct Options {
  std::string output = "-";
  uint64_t seed = 1;
  int threads = 1;
  int distance = 3;

  // network
  int n1 = 16;
  int n2 = 4;
  std::string transfer = "sqnl";
  bool rotated = true;
  int bits = 0;
  bool extra_sample_bit = false;

  // training
  hldsim_train_config train{};
  std::string checkpoint;
  std::string resume;
  std::string train_log;

  // decoding / evaluation
  std::string decoder = "mwpm";
  std::string syndrome;
  int64_t shots = 1000000;
  std::vector<double> eps;
  double eps_min = 0.03;
  double eps_max = 0.3;
  int eps_count = 10;
  std::string failure = "any";

  // sweeps
  std::vector<int> n1_list{8, 16};
  std::vector<int> n2_list{4};
  std::vector<std::string> transfer_list{"sqnl"};
  std::vector<int> rotated_list{1};
  std::vector<int> bits_list{0};

  // fit / pareto
  std::string input;
  std::string cost_column = "bitops";
  std::string perf_column = "p_th";
  bool budget_report = false;
};

hldsim_transfer parse_transfer(const std::string& name) {
  std::string s = name;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "tanh") return HLDSIM_TRANSFER_TANH;
  if (s == "relu") return HLDSIM_TRANSFER_RELU;
  if (s == "sqnl") return HLDSIM_TRANSFER_SQNL;
  throw CliError(kBadValue, "unknown transfer function '" + name + "'");
}

const char* transfer_name(hldsim_transfer t) {
  switch (t) {
    case HLDSIM_TRANSFER_TANH:
      return "tanh";
    case HLDSIM_TRANSFER_RELU:
      return "relu";
    default:
      return "sqnl";
  }
}

hldsim_network_config network_config(const Options& o) {
  hldsim_network_config c{};
  c.distance = o.distance;
  c.n1 = o.n1;
  c.n2 = o.n2;
  c.transfer = parse_transfer(o.transfer);
  c.rotated = o.rotated ? 1 : 0;
  c.bits = o.bits;
  c.extra_sample_bit = o.extra_sample_bit ? 1 : 0;
  return c;
}

std::vector<double> eps_grid(const Options& o) {
  if (!o.eps.empty()) return o.eps;
  if (o.eps_count < 1) throw CliError(kBadValue, "eps-count must be >= 1");
  std::vector<double> out(static_cast<size_t>(o.eps_count));
  check(hldsim_log_spaced(o.eps_min, o.eps_max, o.eps_count, out.data()));
  return out;
}

hldsim_failure_mode failure_mode(const std::string& name) {
  if (name == "any") return HLDSIM_FAIL_ANY;
  if (name == "x") return HLDSIM_FAIL_X;
  if (name == "z") return HLDSIM_FAIL_Z;
  throw CliError(kBadValue, "unknown failure mode '" + name + "'");
}

// ---------------------------------------------------------------------------
// Output.

class Output {
 public:
  explicit Output(const std::string& path) : path_(path) {
    if (path_ != "-") {
      file_.open(path_, std::ios::binary | std::ios::trunc);
      if (!file_) throw CliError(kWriteFailed, "cannot open " + path_ + " for writing");
    }
  }
  std::ostream& stream() { return path_ == "-" ? std::cout : file_; }
  void close() {
    stream().flush();
    if (!stream()) throw CliError(kWriteFailed, "write to " + path_ + " failed");
  }

 private:
  std::string path_;
  std::ofstream file_;
};

struct Header {
  std::string version;
  std::string config_hash;
  uint64_t seed;

  std::string csv_line() const {
    return "# hldsim " + version + " config_hash=" + config_hash + " seed=" + std::to_string(seed);
  }
  nlohmann::ordered_json json() const {
    return {{"tool", "hldsim"}, {"version", version}, {"config_hash", config_hash}, {"seed", seed}};
  }
};

// ---------------------------------------------------------------------------
// CSV input.

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const {
    auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw CliError(kBadConfig, "input has no column '" + name + "'");
    return static_cast<int>(it - columns.begin());
  }
};

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

Table read_csv(const std::string& path) {
  if (path.empty()) throw CliError(kMissingInput, "an input file is required (--input)");
  std::ifstream in(path);
  if (!in) throw CliError(kMissingInput, "cannot read " + path);
  Table t;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto cells = split(line, ',');
    if (t.columns.empty()) {
      t.columns = std::move(cells);
      continue;
    }
    if (cells.size() != t.columns.size()) {
      throw CliError(kBadConfig, path + ": row has " + std::to_string(cells.size()) +
                                     " fields, header has " + std::to_string(t.columns.size()));
    }
    t.rows.push_back(std::move(cells));
  }
  if (t.columns.empty()) throw CliError(kBadConfig, path + ": no header row");
  return t;
}

double to_double(const std::string& s) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw CliError(kBadConfig, "invalid number '" + s + "'");
  }
}

int64_t to_int(const std::string& s) {
  try {
    size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw CliError(kBadConfig, "invalid integer '" + s + "'");
  }
}

std::vector<uint8_t> parse_bits(const std::string& text) {
  std::vector<uint8_t> out;
  for (char ch : text) {
    if (ch == '0' || ch == '1') {
      out.push_back(static_cast<uint8_t>(ch - '0'));
    } else {
      throw CliError(kBadValue, "syndrome must be a string of 0 and 1");
    }
  }
  return out;
}

std::string bits_string(const std::vector<uint8_t>& bits) {
  std::string s;
  for (uint8_t b : bits) s.push_back(b ? '1' : '0');
  return s;
}

// ---------------------------------------------------------------------------
// Subcommands.

int run_decode(const Options& o) {
  hldsim_decoder_kind kind;
  NetworkPtr net;
  if (o.decoder == "ped" || o.decoder == "trivial") {
    kind = HLDSIM_DECODER_TRIVIAL;
  } else if (o.decoder == "mwpm") {
    kind = HLDSIM_DECODER_MWPM;
  } else if (o.decoder == "hld") {
    kind = HLDSIM_DECODER_HLD;
    net = load_network(o.checkpoint);
  } else {
    throw CliError(kBadValue, "unknown decoder '" + o.decoder + "'");
  }
  int d = o.distance;
  if (net) {
    hldsim_network_config c{};
    check(hldsim_network_get_config(net.get(), &c));
    d = c.distance;
  }
  hldsim_decoder* raw = nullptr;
  check(hldsim_decoder_create(d, kind, net.get(), &raw));
  DecoderPtr dec(raw);
  const auto s = parse_bits(o.syndrome);
  const size_t n_data = static_cast<size_t>(d) * d;
  std::vector<uint8_t> x(n_data), z(n_data);
  check(hldsim_decode(dec.get(), s.data(), s.size(), x.data(), z.data(), n_data));
  Output out(o.output);
  out.stream() << "x " << bits_string(x) << "\n"
               << "z " << bits_string(z) << "\n";
  out.close();
  return kOk;
}

struct TrainContext {
  std::ostream* log = nullptr;
  std::string checkpoint;
  int status = kOk;
  std::string error;
};

void on_train_log(const hldsim_train_row* row, const hldsim_network* current, void* user) {
  auto* ctx = static_cast<TrainContext*>(user);
  if (ctx->log) {
    *ctx->log << row->iteration << ',' << row->samples_seen << ',' << fmt(row->ler) << ','
              << fmt(row->loss) << '\n';
    ctx->log->flush();
  }
  std::fprintf(stderr, "iteration %" PRId64 " samples %" PRId64 " ler %.5f loss %.5f\n",
               row->iteration, row->samples_seen, row->ler, row->loss);
  if (!ctx->checkpoint.empty() && ctx->status == kOk) {
    if (hldsim_network_save(current, ctx->checkpoint.c_str()) != HLDSIM_OK) {
      ctx->status = kWriteFailed;
      ctx->error = hldsim_last_error();
    }
  }
}

int run_train(const Options& o, const Header& header) {
  NetworkPtr net;
  if (!o.resume.empty()) {
    net = load_network(o.resume);
  } else {
    const auto cfg = network_config(o);
    hldsim_network* raw = nullptr;
    check(hldsim_network_create(&cfg, o.seed, &raw));
    net.reset(raw);
  }
  if (o.checkpoint.empty()) throw CliError(kBadValue, "train needs --checkpoint for its output");

  std::optional<Output> log;
  if (!o.train_log.empty()) {
    log.emplace(o.train_log);
    log->stream() << header.csv_line() << "\n"
                  << "iteration,samples_seen,ler,loss\n";
  }
  TrainContext ctx;
  ctx.log = log ? &log->stream() : nullptr;
  ctx.checkpoint = o.checkpoint;
  hldsim_train_config tc = o.train;
  tc.seed = o.seed;
  tc.threads = o.threads;
  check(hldsim_train(net.get(), &tc, on_train_log, &ctx));
  if (ctx.status != kOk) throw CliError(ctx.status, ctx.error);
  check(hldsim_network_save(net.get(), o.checkpoint.c_str()));
  if (log) log->close();
  return kOk;
}

struct DecoderChoice {
  hldsim_decoder_kind kind;
  NetworkPtr net;
  int distance;
  std::string name;
};

DecoderChoice choose_decoder(const Options& o) {
  DecoderChoice c{HLDSIM_DECODER_MWPM, nullptr, o.distance, o.decoder};
  if (o.decoder == "trivial" || o.decoder == "ped") {
    c.kind = HLDSIM_DECODER_TRIVIAL;
    c.name = "trivial";
  } else if (o.decoder == "mwpm") {
    c.kind = HLDSIM_DECODER_MWPM;
  } else if (o.decoder == "hld") {
    c.kind = HLDSIM_DECODER_HLD;
    c.net = load_network(o.checkpoint);
    if (o.bits > 0) {
      hldsim_network* q = nullptr;
      check(hldsim_network_quantize(c.net.get(), o.bits, o.extra_sample_bit ? 1 : 0, &q));
      c.net.reset(q);
    }
    hldsim_network_config cfg{};
    check(hldsim_network_get_config(c.net.get(), &cfg));
    c.distance = cfg.distance;
  } else {
    throw CliError(kBadValue, "unknown decoder '" + o.decoder + "'");
  }
  return c;
}

std::vector<hldsim_benchmark_point> run_benchmark(const hldsim_decoder* dec,
                                                  const std::vector<double>& eps, const Options& o) {
  std::vector<hldsim_benchmark_point> pts(eps.size());
  check(hldsim_benchmark(dec, eps.data(), eps.size(), o.shots, o.seed, o.threads,
                         failure_mode(o.failure), pts.data()));
  return pts;
}

int run_eval(const Options& o, const Header& header) {
  auto choice = choose_decoder(o);
  hldsim_decoder* raw = nullptr;
  check(hldsim_decoder_create(choice.distance, choice.kind, choice.net.get(), &raw));
  DecoderPtr dec(raw);
  const auto eps = eps_grid(o);
  const auto pts = run_benchmark(dec.get(), eps, o);

  Output out(o.output);
  auto& os = out.stream();
  os << header.csv_line() << "\n";
  os << "distance,decoder,eps_p,eps_l,shots,failures,variance\n";
  for (const auto& p : pts) {
    os << choice.distance << ',' << choice.name << ',' << fmt(p.eps_p) << ',' << fmt(p.eps_l) << ','
       << p.shots << ',' << p.failures << ',' << fmt(p.variance) << '\n';
  }
  out.close();

  double pth = 0, lo = 0, hi = 0;
  if (hldsim_pseudo_threshold(pts.data(), pts.size(), &pth, &lo, &hi) == HLDSIM_OK) {
    std::fprintf(stderr, "pseudo-threshold %.5f (99.9%% interval %.5f .. %.5f)\n", pth, lo, hi);
  } else {
    std::fprintf(stderr, "pseudo-threshold: %s\n", hldsim_last_error());
  }
  return kOk;
}

nlohmann::ordered_json nullable(double v, bool ok) {
  return ok ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
}

int run_fit(const Options& o, const Header& header) {
  const Table t = read_csv(o.input);
  const int c_d = t.column("distance");
  const int c_dec = t.column("decoder");
  const int c_p = t.column("eps_p");
  const int c_l = t.column("eps_l");
  const int c_n = t.column("shots");
  const int c_v = t.column("variance");
  const int c_f = t.column("failures");

  std::map<std::pair<int64_t, std::string>, std::vector<hldsim_benchmark_point>> groups;
  for (const auto& r : t.rows) {
    hldsim_benchmark_point p{to_double(r[c_p]), to_double(r[c_l]), to_int(r[c_n]), to_int(r[c_f]),
                             to_double(r[c_v])};
    groups[{to_int(r[c_d]), r[c_dec]}].push_back(p);
  }
  if (groups.empty()) throw CliError(kBadConfig, o.input + ": no data rows");

  nlohmann::ordered_json doc;
  doc["header"] = header.json();
  doc["fits"] = nlohmann::ordered_json::array();
  int status = kOk;
  std::string diagnostic;
  for (const auto& [key, pts] : groups) {
    nlohmann::ordered_json rec;
    rec["distance"] = key.first;
    rec["decoder"] = key.second;
    double pth = 0, lo = 0, hi = 0;
    const bool have_pth = hldsim_pseudo_threshold(pts.data(), pts.size(), &pth, &lo, &hi) == HLDSIM_OK;
    rec["pseudo_threshold"] = nullable(pth, have_pth);
    rec["ci_low"] = nullable(lo, have_pth);
    rec["ci_high"] = nullable(hi, have_pth);
    hldsim_fit_result fit{};
    const hldsim_status st = hldsim_fit(pts.data(), pts.size(), &fit);
    if (st == HLDSIM_OK || st == HLDSIM_ERR_NOT_CONVERGED) {
      rec["p_th"] = fit.p_th;
      rec["s"] = fit.s;
      rec["c"] = fit.c;
      rec["residual"] = fit.residual;
      rec["evaluations"] = fit.evaluations;
      rec["converged"] = fit.converged != 0;
    } else {
      rec["p_th"] = nullptr;
      rec["converged"] = false;
    }
    if (st != HLDSIM_OK) {
      rec["error"] = hldsim_last_error();
      if (status == kOk) {
        status = exit_for(st);
        diagnostic = "fit for d=" + std::to_string(key.first) + " " + key.second + ": " +
                     hldsim_last_error();
      }
    }
    doc["fits"].push_back(rec);
  }
  Output out(o.output);
  out.stream() << doc.dump(2) << "\n";
  out.close();
  if (status != kOk) throw CliError(status, diagnostic);
  return kOk;
}

nlohmann::ordered_json cost_json(const hldsim_cost& c) {
  return {{"pp_bits", c.pp_bits},     {"fa_count", c.fa_count}, {"tree_depth", c.tree_depth},
          {"nl_bitops", c.nl_bitops}, {"nl_depth", c.nl_depth}, {"bitops", c.bitops}};
}

int run_layout(const Options& o) {
  hldsim_layout* raw = nullptr;
  check(hldsim_layout_create(o.distance, &raw));
  LayoutPtr layout(raw);
  size_t needed = 0;
  hldsim_layout_json(layout.get(), nullptr, 0, &needed);
  std::string text(needed, '\0');
  check(hldsim_layout_json(layout.get(), text.data(), text.size(), nullptr));
  text.resize(needed - 1);
  Output out(o.output);
  out.stream() << nlohmann::ordered_json::parse(text).dump(2) << "\n";
  out.close();
  return kOk;
}

int run_cost(const Options& o, const Header& header) {
  const auto cfg = network_config(o);
  if (cfg.bits <= 0) throw CliError(kBadValue, "cost needs --bits");
  hldsim_cost total{};
  hldsim_cost layers[3]{};
  check(hldsim_network_cost(&cfg, &total, layers));
  nlohmann::ordered_json doc;
  doc["header"] = header.json();
  doc["network"] = {{"distance", cfg.distance}, {"n1", cfg.n1},
                    {"n2", cfg.n2},             {"transfer", transfer_name(cfg.transfer)},
                    {"rotated", cfg.rotated != 0}, {"bits", cfg.bits},
                    {"extra_sample_bit", cfg.extra_sample_bit != 0}};
  const char* names[3] = {"hidden1", "hidden2", "output"};
  for (int i = 0; i < 3; ++i) doc["layers"][names[i]] = cost_json(layers[i]);
  doc["total"] = cost_json(total);
  doc["total"]["critical_path"] = total.tree_depth + total.nl_depth;
  Output out(o.output);
  out.stream() << doc.dump(2) << "\n";
  out.close();
  return kOk;
}

const char* kSweepColumns =
    "distance,n1,n2,transfer,rotated,bits,status,p_th,ci_low,ci_high,slope,pp_bits,fa_count,"
    "tree_depth,bitops,error";

std::string csv_safe(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

int run_sweep(const Options& o, const Header& header) {
  if (o.n1_list.empty() || o.n2_list.empty() || o.transfer_list.empty() ||
      o.rotated_list.empty() || o.bits_list.empty()) {
    throw CliError(kBadValue, "sweep ranges must not be empty");
  }
  const auto eps = eps_grid(o);
  Output out(o.output);
  auto& os = out.stream();
  os << header.csv_line() << "\n" << kSweepColumns << "\n";

  // Trained networks are shared between cells that only differ in the
  // inference bit width when no regularization ties training to it.
  std::map<std::tuple<int, int, int, int, int>, std::shared_ptr<hldsim_network>> cache;
  for (int n1 : o.n1_list) {
    for (int n2 : o.n2_list) {
      for (const auto& tname : o.transfer_list) {
        for (int rot : o.rotated_list) {
          for (int bits : o.bits_list) {
            std::string status = "ok", error;
            std::string pth = "NA", lo = "NA", hi = "NA", slope = "NA";
            std::string pp = "NA", fa = "NA", depth = "NA", bitops = "NA";
            std::string tlabel = tname;
            try {
              const hldsim_transfer tf = parse_transfer(tname);
              tlabel = transfer_name(tf);
              hldsim_network_config cfg{o.distance, n1, n2, tf, rot ? 1 : 0, 0, 0};
              hldsim_train_config tc = o.train;
              tc.seed = o.seed;
              tc.threads = o.threads;
              if (bits > 0) {
                tc.reg_bits = std::clamp(bits + (o.extra_sample_bit ? 1 : 0), 2, 8);
              }
              const int reg_key = (bits > 0 && tc.reg_scale > 0.0) ? tc.reg_bits : -1;
              const auto key = std::make_tuple(n1, n2, static_cast<int>(tf), rot, reg_key);
              auto it = cache.find(key);
              if (it == cache.end()) {
                hldsim_network* raw = nullptr;
                check(hldsim_network_create(&cfg, o.seed, &raw));
                std::shared_ptr<hldsim_network> net(raw, hldsim_network_destroy);
                check(hldsim_train(net.get(), &tc, nullptr, nullptr));
                it = cache.emplace(key, std::move(net)).first;
              }
              NetworkPtr quant;
              const hldsim_network* use = it->second.get();
              if (bits > 0) {
                hldsim_network* q = nullptr;
                check(hldsim_network_quantize(use, bits, o.extra_sample_bit ? 1 : 0, &q));
                quant.reset(q);
                use = q;
                cfg.bits = bits;
                cfg.extra_sample_bit = o.extra_sample_bit ? 1 : 0;
                hldsim_cost c{};
                check(hldsim_network_cost(&cfg, &c, nullptr));
                pp = std::to_string(c.pp_bits);
                fa = std::to_string(c.fa_count);
                depth = std::to_string(c.tree_depth + c.nl_depth);
                bitops = std::to_string(c.bitops);
              }
              hldsim_decoder* rawdec = nullptr;
              check(hldsim_decoder_create(o.distance, HLDSIM_DECODER_HLD, use, &rawdec));
              DecoderPtr dec(rawdec);
              const auto pts = run_benchmark(dec.get(), eps, o);
              double p = 0, l = 0, h = 0;
              check(hldsim_pseudo_threshold(pts.data(), pts.size(), &p, &l, &h));
              pth = fmt(p);
              lo = fmt(l);
              hi = fmt(h);
              hldsim_fit_result fit{};
              if (hldsim_fit(pts.data(), pts.size(), &fit) == HLDSIM_OK) slope = fmt(fit.s);
            } catch (const CliError& e) {
              status = "error";
              error = e.what();
            }
            os << o.distance << ',' << n1 << ',' << n2 << ',' << tlabel << ',' << rot << ','
               << bits << ',' << status << ',' << pth << ',' << lo << ',' << hi << ',' << slope
               << ',' << pp << ',' << fa << ',' << depth << ',' << bitops << ','
               << csv_safe(error) << '\n';
            os.flush();
          }
        }
      }
    }
  }
  out.close();
  return kOk;
}

int run_pareto(const Options& o, const Header& header) {
  const Table t = read_csv(o.input);
  const int c_cost = t.column(o.cost_column);
  const int c_perf = t.column(o.perf_column);
  const int c_status = std::count(t.columns.begin(), t.columns.end(), "status")
                           ? t.column("status")
                           : -1;
  std::vector<size_t> rows;
  std::vector<double> cost, perf;
  for (size_t i = 0; i < t.rows.size(); ++i) {
    const auto& r = t.rows[i];
    if (c_status >= 0 && r[c_status] != "ok") continue;
    if (r[c_cost] == "NA" || r[c_perf] == "NA") continue;
    rows.push_back(i);
    cost.push_back(to_double(r[c_cost]));
    perf.push_back(to_double(r[c_perf]));
  }
  std::vector<size_t> front(rows.size());
  size_t n_front = 0;
  check(hldsim_pareto_front(cost.data(), perf.data(), rows.size(), front.data(), &n_front));
  front.resize(n_front);
  std::sort(front.begin(), front.end(), [&](size_t a, size_t b) {
    return cost[a] != cost[b] ? cost[a] < cost[b] : rows[a] < rows[b];
  });

  Output out(o.output);
  auto& os = out.stream();
  os << header.csv_line() << "\n";
  if (!o.budget_report) {
    for (size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << "\n";
    for (size_t k : front) {
      const auto& r = t.rows[rows[k]];
      for (size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
      os << "\n";
    }
  } else {
    // Best configuration for every budget level on the front: the cheapest
    // front point whose cost fits is dominated by the most expensive one that
    // still fits, so each front point is the answer for budgets in
    // [its cost, next cost).
    const int c_d = std::count(t.columns.begin(), t.columns.end(), "distance")
                        ? t.column("distance")
                        : -1;
    os << "budget," << o.perf_column << ",distance,row\n";
    for (size_t k : front) {
      os << fmt(cost[k]) << ',' << fmt(perf[k]) << ','
         << (c_d >= 0 ? t.rows[rows[k]][c_d] : std::string("NA")) << ',' << rows[k] << '\n';
    }
  }
  out.close();
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  hldsim_train_config_default(&o.train);
  o.train.log_every = 2000;

  CLI::App app{"hldsim: surface-code decoders, neural high-level decoding and hardware cost"};
  app.set_version_flag("--version", std::string(hldsim_version()));
  app.set_config("--config", "", "Flat key = value configuration file");
  app.allow_config_extras(false);
  app.require_subcommand(1, 1);

  const std::string g_run = "Run";
  app.add_option("-o,--output", o.output, "Output file, - for stdout")->group(g_run);
  app.add_option("--seed", o.seed, "Master seed")->group(g_run);
  app.add_option("--threads", o.threads, "Worker threads (results do not depend on it)")
      ->check(CLI::PositiveNumber)
      ->group(g_run);
  app.add_option("-d,--distance", o.distance, "Code distance")->group(g_run);

  const std::string g_net = "Network";
  app.add_option("--n1", o.n1, "First hidden layer size")->group(g_net);
  app.add_option("--n2", o.n2, "Second hidden layer size")->group(g_net);
  app.add_option("--transfer", o.transfer, "tanh, relu or sqnl")->group(g_net);
  app.add_option("--rotated", o.rotated, "Share weights over the four rotations")->group(g_net);
  app.add_option("--bits", o.bits, "Fixed-point width, 0 for float")->group(g_net);
  app.add_option("--extra-sample-bit", o.extra_sample_bit, "One more bit on the sampling grid")
      ->group(g_net);

  const std::string g_train = "Training";
  app.add_option("--batch-size", o.train.batch_size)->group(g_train);
  app.add_option("--batches", o.train.n_batches, "Number of ADAM steps")->group(g_train);
  app.add_option("--learning-rate", o.train.learning_rate)->group(g_train);
  app.add_option("--beta1", o.train.beta1)->group(g_train);
  app.add_option("--beta2", o.train.beta2)->group(g_train);
  app.add_option("--adam-epsilon", o.train.epsilon)->group(g_train);
  app.add_option("--reg-scale", o.train.reg_scale, "Weight regularization scale")->group(g_train);
  app.add_option("--reg-bits", o.train.reg_bits, "Grid of the quantization penalty")->group(g_train);
  app.add_option("--p-train", o.train.p_train, "Training error rate, 0 for the default")
      ->group(g_train);
  app.add_option("--log-every", o.train.log_every, "Batches per logged iteration and checkpoint")
      ->group(g_train);
  app.add_option("--checkpoint", o.checkpoint, "Checkpoint to write (train) or read")->group(g_train);
  app.add_option("--resume", o.resume, "Continue training from this checkpoint")->group(g_train);
  app.add_option("--train-log", o.train_log, "CSV training curve")->group(g_train);

  const std::string g_eval = "Evaluation";
  app.add_option("--decoder", o.decoder, "trivial (ped), mwpm or hld")->group(g_eval);
  app.add_option("--syndrome", o.syndrome, "Syndrome bit string for decode")->group(g_eval);
  app.add_option("--shots", o.shots, "Shots per error rate")->group(g_eval);
  app.add_option("--eps", o.eps, "Explicit physical error rates")->delimiter(',')->group(g_eval);
  app.add_option("--eps-min", o.eps_min)->group(g_eval);
  app.add_option("--eps-max", o.eps_max)->group(g_eval);
  app.add_option("--eps-count", o.eps_count)->group(g_eval);
  app.add_option("--failure", o.failure, "any, x or z")->group(g_eval);

  const std::string g_sweep = "Sweep";
  app.add_option("--n1-list", o.n1_list)->delimiter(',')->group(g_sweep);
  app.add_option("--n2-list", o.n2_list)->delimiter(',')->group(g_sweep);
  app.add_option("--transfer-list", o.transfer_list)->delimiter(',')->group(g_sweep);
  app.add_option("--rotated-list", o.rotated_list)->delimiter(',')->group(g_sweep);
  app.add_option("--bits-list", o.bits_list, "0 is float")->delimiter(',')->group(g_sweep);

  const std::string g_report = "Reports";
  app.add_option("--input", o.input, "Input CSV for fit and pareto")->group(g_report);
  app.add_option("--cost-column", o.cost_column)->group(g_report);
  app.add_option("--perf-column", o.perf_column)->group(g_report);
  app.add_flag("--budget-report", o.budget_report, "Best point per cost budget")->group(g_report);

  auto* decode = app.add_subcommand("decode", "Decode one syndrome");
  auto* train = app.add_subcommand("train", "Train a network");
  auto* eval = app.add_subcommand("eval", "Monte Carlo logical error rates");
  auto* sweep = app.add_subcommand("sweep", "Train and evaluate a grid of networks");
  auto* fit = app.add_subcommand("fit", "Fit the pseudo-threshold model to eval output");
  auto* cost = app.add_subcommand("cost", "Structural hardware cost of a network");
  auto* pareto = app.add_subcommand("pareto", "Cost/performance Pareto front");
  auto* layout = app.add_subcommand("layout", "Print the lattice layout as JSON");
  for (auto* sub : {decode, train, eval, sweep, fit, cost, pareto, layout}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ConfigError& e) {
    std::fprintf(stderr, "hldsim: malformed config: %s\n", e.what());
    return kBadConfig;
  } catch (const CLI::FileError& e) {
    std::fprintf(stderr, "hldsim: %s\n", e.what());
    return kBadConfig;
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "hldsim: %s\n", e.what());
    return kUsage;
  }

  const Header header{hldsim_version(), hex64(fnv1a(app.config_to_str(true, false))), o.seed};
  try {
    if (*decode) return run_decode(o);
    if (*train) return run_train(o, header);
    if (*eval) return run_eval(o, header);
    if (*sweep) return run_sweep(o, header);
    if (*fit) return run_fit(o, header);
    if (*cost) return run_cost(o, header);
    if (*pareto) return run_pareto(o, header);
    if (*layout) return run_layout(o);
  } catch (const CliError& e) {
    std::fprintf(stderr, "hldsim: %s\n", e.what());
    return e.code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "hldsim: %s\n", e.what());
    return kRuntime;
  }
  return kUsage;
}
