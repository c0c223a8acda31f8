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

#include "hldsim/eval.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <future>
#include <numeric>

#include <Eigen/Core>
#include <unsupported/Eigen/LevenbergMarquardt>

#include "hldsim/noise.hpp"

namespace hldsim {

void TrivialDecoder::correct(const Syndrome& s, ErrorConfig& out) const { ped_.decode_into(s, out); }

void MatchingDecoder::correct(const Syndrome& s, ErrorConfig& out) const {
  mwpm_.decode_into(s, out);
}

HighLevelDecoder::HighLevelDecoder(const Layout& layout, NetworkConfig cfg, Weights weights)
    : layout_(&layout), ped_(layout), cfg_(std::move(cfg)), weights_(std::move(weights)) {
  cfg_.validate();
  if (cfg_.d != layout.distance()) throw std::invalid_argument("network distance differs from layout");
  forward_float(cfg_, weights_, Syndrome(layout.num_ancillas()));
  for (int k = 0; k < 4; ++k) ops_[k] = logical_operator(layout, {(k & 1) != 0, (k & 2) != 0});
}

HighLevelDecoder::HighLevelDecoder(const Layout& layout, NetworkConfig cfg, QuantizedWeights weights)
    : layout_(&layout), ped_(layout), cfg_(std::move(cfg)), quantized_(std::move(weights)) {
  cfg_.validate();
  if (cfg_.d != layout.distance()) throw std::invalid_argument("network distance differs from layout");
  forward_fixed(cfg_, *quantized_, Syndrome(layout.num_ancillas()));
  for (int k = 0; k < 4; ++k) ops_[k] = logical_operator(layout, {(k & 1) != 0, (k & 2) != 0});
}

LogicalClass HighLevelDecoder::predict(const Syndrome& s) const {
  if (static_cast<int>(s.size()) != layout_->num_ancillas()) {
    throw std::invalid_argument("syndrome length does not match layout");
  }
  if (quantized_) return forward_fixed_unchecked(cfg_, *quantized_, s.bits);
  return forward_float_unchecked(cfg_, weights_, s.bits).cls;
}

void HighLevelDecoder::correct(const Syndrome& s, ErrorConfig& out) const {
  ped_.decode_into(s, out);
  const LogicalClass cls = predict(s);
  if (!cls.is_identity()) out ^= ops_[(cls.lx ? 1 : 0) + (cls.lz ? 2 : 0)];
}

BenchmarkPoint make_point(double eps_p, int64_t failures, int64_t shots) {
  if (shots < 1) throw std::invalid_argument("shots must be >= 1");
  if (failures < 0 || failures > shots) throw std::invalid_argument("failures out of range");
  BenchmarkPoint pt;
  pt.eps_p = eps_p;
  pt.shots = shots;
  pt.failures = failures;
  pt.eps_l = static_cast<double>(failures) / static_cast<double>(shots);
  pt.variance = pt.eps_l * (1.0 - pt.eps_l) / static_cast<double>(shots);
  return pt;
}

namespace {

constexpr int64_t kChunk = 8192;

bool is_failure(LogicalClass cls, FailureMode mode) {
  switch (mode) {
    case FailureMode::kX:
      return cls.lx;
    case FailureMode::kZ:
      return cls.lz;
    case FailureMode::kAny:
      break;
  }
  return cls.lx || cls.lz;
}

int64_t count_failures(const Decoder& decoder, const Layout& layout, double p, uint64_t key,
                       int64_t begin, int64_t end, FailureMode mode) {
  ErrorConfig actual(layout.num_data());
  ErrorConfig corr(layout.num_data());
  Syndrome s(layout.num_ancillas());
  int64_t failures = 0;
  for (int64_t shot = begin; shot < end; ++shot) {
    ShotRng rng(key, RngStream::kEval, static_cast<uint64_t>(shot));
    sample_depolarizing_into(layout, p, rng, actual);
    compute_syndrome_into(layout, actual, s);
    decoder.correct(s, corr);
    actual ^= corr;
    if (is_failure(logical_class_unchecked(layout, actual), mode)) ++failures;
  }
  return failures;
}

}  // namespace

std::vector<BenchmarkPoint> benchmark(const Decoder& decoder, const Layout& layout,
                                      std::span<const double> eps_list, int64_t shots, uint64_t seed,
                                      const BenchmarkOptions& options) {
  if (eps_list.empty()) throw std::invalid_argument("empty error-rate list");
  if (shots < 1) throw std::invalid_argument("shots must be >= 1");
  if (options.threads < 1) throw std::invalid_argument("threads must be >= 1");
  for (double p : eps_list) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("physical error rate outside [0, 1]");
  }

  std::vector<BenchmarkPoint> out;
  out.reserve(eps_list.size());
  const int64_t n_chunks = (shots + kChunk - 1) / kChunk;
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    const double p = eps_list[i];
    const uint64_t key = splitmix64(seed + i);
    int64_t failures = 0;
    if (options.threads == 1 || n_chunks == 1) {
      failures = count_failures(decoder, layout, p, key, 0, shots, options.mode);
    } else {
      std::atomic<int64_t> next{0};
      auto worker = [&]() {
        int64_t local = 0;
        for (int64_t c = next++; c < n_chunks; c = next++) {
          local += count_failures(decoder, layout, p, key, c * kChunk,
                                  std::min(shots, (c + 1) * kChunk), options.mode);
        }
        return local;
      };
      const int workers = static_cast<int>(std::min<int64_t>(options.threads, n_chunks));
      std::vector<std::future<int64_t>> jobs;
      for (int t = 0; t < workers; ++t) jobs.push_back(std::async(std::launch::async, worker));
      for (auto& job : jobs) failures += job.get();
    }
    out.push_back(make_point(p, failures, shots));
  }
  return out;
}

std::vector<double> log_spaced(double lo, double hi, int n) {
  if (!(lo > 0.0 && hi >= lo) || n < 1) throw std::invalid_argument("invalid log-spaced range");
  std::vector<double> out(static_cast<std::size_t>(n));
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < n; ++i) out[i] = std::exp(a + (b - a) * i / (n - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

namespace {

// Two-sided 99.9% standard normal quantile.
constexpr double kZ999 = 3.2905267314919255;

std::vector<BenchmarkPoint> usable_sorted(std::span<const BenchmarkPoint> points) {
  std::vector<BenchmarkPoint> pts;
  for (const auto& pt : points) {
    if (pt.eps_l > 0.0 && pt.eps_p > 0.0) pts.push_back(pt);
  }
  std::stable_sort(pts.begin(), pts.end(),
                   [](const BenchmarkPoint& a, const BenchmarkPoint& b) { return a.eps_p < b.eps_p; });
  return pts;
}

}  // namespace

PseudoThreshold pseudo_threshold(std::span<const BenchmarkPoint> points) {
  const auto pts = usable_sorted(points);
  auto gap = [](const BenchmarkPoint& pt) { return std::log(pt.eps_l) - std::log(pt.eps_p); };
  if (pts.size() == 1 && gap(pts[0]) == 0.0) return {pts[0].eps_p, pts[0].eps_p, pts[0].eps_p};
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const auto& a = pts[i];
    const auto& b = pts[i + 1];
    const double g1 = gap(a);
    const double g2 = gap(b);
    if (!((g1 <= 0.0 && g2 >= 0.0) || (g1 >= 0.0 && g2 <= 0.0))) continue;
    if (g1 == 0.0 && g2 == 0.0) return {a.eps_p, a.eps_p, b.eps_p};
    const double x1 = std::log(a.eps_p);
    const double x2 = std::log(b.eps_p);
    const double k = (g2 - g1) / (x2 - x1);
    const double x = x1 - g1 / k;
    const double sg = std::sqrt(a.variance / (a.eps_l * a.eps_l) + b.variance / (b.eps_l * b.eps_l));
    const double h = kZ999 * sg / std::abs(k);
    return {std::exp(x), std::exp(x - h), std::exp(x + h)};
  }
  throw NoCrossingError("logical error rate does not cross eps_l = eps_p");
}

double model_log_ler(double p_th, double s, double c, double eps_p) {
  const double lp = std::log(p_th);
  return lp + s * (1.0 - c * eps_p) * (std::log(eps_p) - lp);
}

namespace {

struct ModelFunctor : Eigen::DenseFunctor<double> {
  ModelFunctor(std::vector<double> eps, std::vector<double> y)
      : Eigen::DenseFunctor<double>(3, static_cast<int>(eps.size())),
        eps_(std::move(eps)),
        y_(std::move(y)) {}

  // theta = (log p_th, s, c)
  int operator()(const InputType& theta, ValueType& r) const {
    for (std::size_t i = 0; i < eps_.size(); ++i) {
      const double x = std::log(eps_[i]);
      r[static_cast<Eigen::Index>(i)] =
          theta[0] + theta[1] * (1.0 - theta[2] * eps_[i]) * (x - theta[0]) - y_[i];
    }
    return 0;
  }

  int df(const InputType& theta, JacobianType& jac) const {
    for (std::size_t i = 0; i < eps_.size(); ++i) {
      const auto row = static_cast<Eigen::Index>(i);
      const double x = std::log(eps_[i]);
      const double flat = 1.0 - theta[2] * eps_[i];
      jac(row, 0) = 1.0 - theta[1] * flat;
      jac(row, 1) = flat * (x - theta[0]);
      jac(row, 2) = -theta[1] * eps_[i] * (x - theta[0]);
    }
    return 0;
  }

  std::vector<double> eps_;
  std::vector<double> y_;
};

}  // namespace

namespace {

FitResult run_fit(const std::vector<double>& eps, const std::vector<double>& y, Eigen::VectorXd theta) {
  ModelFunctor functor(eps, y);
  Eigen::LevenbergMarquardt<ModelFunctor> lm(functor);
  lm.setXtol(1e-15);
  lm.setFtol(1e-15);
  lm.setGtol(0.0);
  lm.setMaxfev(4000);
  const auto status = lm.minimize(theta);

  FitResult fit;
  fit.p_th = std::exp(theta[0]);
  fit.s = theta[1];
  fit.c = theta[2];
  Eigen::VectorXd r(static_cast<Eigen::Index>(eps.size()));
  functor(theta, r);
  fit.residual = r.squaredNorm();
  fit.evaluations = static_cast<int>(lm.nfev());

  using namespace Eigen::LevenbergMarquardtSpace;
  const bool stopped = status == RelativeReductionTooSmall || status == RelativeErrorTooSmall ||
                       status == RelativeErrorAndReductionTooSmall || status == CosinusTooSmall ||
                       status == FtolTooSmall || status == XtolTooSmall || status == GtolTooSmall;
  if (!stopped) {
    fit.message = "optimizer stopped without converging (status " + std::to_string(status) + ")";
  } else if (!std::isfinite(fit.residual) || !(fit.p_th > 0.0 && fit.p_th < 1.0) || !(fit.s > 0.0)) {
    fit.message = "fit left the admissible region p_th in (0, 1), s > 0";
  } else {
    fit.converged = true;
  }
  return fit;
}

}  // namespace

FitResult fit_model(std::span<const BenchmarkPoint> points) {
  const auto pts = usable_sorted(points);
  if (pts.size() < 4) throw std::invalid_argument("fit needs at least 4 points with eps_l > 0");
  std::vector<double> eps, y;
  for (const auto& pt : pts) {
    eps.push_back(pt.eps_p);
    y.push_back(std::log(pt.eps_l));
  }

  // With c > 0 the curve can cross eps_l = eps_p twice, so every crossing
  // seeds its own start, each with and without flattening.
  std::vector<double> seeds;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const std::array<BenchmarkPoint, 2> pair = {pts[i], pts[i + 1]};
    try {
      seeds.push_back(std::log(pseudo_threshold(pair).p_th));
    } catch (const NoCrossingError&) {
    }
  }
  if (seeds.empty()) seeds.push_back(0.5 * (std::log(eps.front()) + std::log(eps.back())));
  const double secant = (y.back() - y.front()) / (std::log(eps.back()) - std::log(eps.front()));

  FitResult best;
  bool have = false;
  int evaluations = 0;
  for (double lp : seeds) {
    for (double c : {0.0, 1.0}) {
      Eigen::VectorXd theta(3);
      theta << lp, secant > 0.0 ? secant : 1.0, c;
      FitResult fit = run_fit(eps, y, theta);
      evaluations += fit.evaluations;
      const bool better = !have || (fit.converged && !best.converged) ||
                          (fit.converged == best.converged && fit.residual < best.residual);
      if (better) {
        best = std::move(fit);
        have = true;
      }
    }
  }
  best.evaluations = evaluations;
  return best;
}

}  // namespace hldsim
