// Copyright 2026 The optbench Authors.
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

#include "optbench/schedule.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <string>

#include "optbench/error.hpp"

namespace optbench {

namespace {

enum class Piece { warmup, decay };

// Which formula governs real time s. Integer steps map to themselves; the
// left limit at t is read off s = t - 0.5.
Piece piece_at(const ScheduleSpec& spec, double s) {
  const auto tw = static_cast<double>(spec.t_warmup);
  switch (spec.family) {
    case ScheduleFamily::poly_warmup_decay:
      return (spec.t_warmup > 0 && s <= tw) ? Piece::warmup : Piece::decay;
    case ScheduleFamily::legacy_bert:
      return s < tw ? Piece::warmup : Piece::decay;
    case ScheduleFamily::cosine:
    case ScheduleFamily::constant:
      return Piece::decay;
  }
  return Piece::decay;
}

double eval_piece(const ScheduleSpec& spec, Piece piece, std::int64_t t) {
  const auto td = static_cast<double>(t);
  const auto tw = static_cast<double>(spec.t_warmup);
  const auto total = static_cast<double>(spec.total_steps);
  switch (spec.family) {
    case ScheduleFamily::poly_warmup_decay:
      if (piece == Piece::warmup) {
        return spec.eta_init + (spec.eta_peak - spec.eta_init) * std::pow(td / tw, spec.p_warmup);
      }
      return spec.eta_final + (spec.eta_peak - spec.eta_final) * std::pow((total - td) / (total - tw), spec.p_decay);
    case ScheduleFamily::cosine:
      return 0.5 * spec.eta_peak * (1.0 + std::cos(std::numbers::pi * td / total));
    case ScheduleFamily::legacy_bert:
      if (piece == Piece::warmup) return spec.eta_peak * td / tw;
      return spec.eta_peak * (1.0 - td / total);
    case ScheduleFamily::constant:
      return spec.eta_peak;
  }
  return 0.0;
}

void check_step(const ScheduleSpec& spec, std::int64_t t) {
  if (t < 0 || t > spec.total_steps) {
    fail(ErrorCode::OutOfRangeStep,
         "step " + std::to_string(t) + " outside [0, " + std::to_string(spec.total_steps) + "]");
  }
}

}  // namespace

std::string_view to_string(ScheduleFamily family) {
  switch (family) {
    case ScheduleFamily::poly_warmup_decay: return "poly_warmup_decay";
    case ScheduleFamily::cosine: return "cosine";
    case ScheduleFamily::legacy_bert: return "legacy_bert";
    case ScheduleFamily::constant: return "constant";
  }
  return "?";
}

ScheduleFamily parse_schedule_family(std::string_view text) {
  for (auto f : {ScheduleFamily::poly_warmup_decay, ScheduleFamily::cosine, ScheduleFamily::legacy_bert,
                 ScheduleFamily::constant}) {
    if (to_string(f) == text) return f;
  }
  fail(ErrorCode::ValidationError, "unknown schedule family '" + std::string(text) + "'");
}

void ScheduleSpec::validate() const {
  auto nonneg = [](double v) { return std::isfinite(v) && v >= 0.0; };
  if (!nonneg(eta_init)) fail(ErrorCode::ValidationError, "eta_init must be finite and >= 0");
  if (!nonneg(eta_peak) || eta_peak <= 0.0) fail(ErrorCode::ValidationError, "eta_peak must be finite and > 0");
  if (!nonneg(eta_final)) fail(ErrorCode::ValidationError, "eta_final must be finite and >= 0");
  if (!std::isfinite(p_warmup) || p_warmup <= 0.0) fail(ErrorCode::ValidationError, "p_warmup must be > 0");
  if (!std::isfinite(p_decay) || p_decay <= 0.0) fail(ErrorCode::ValidationError, "p_decay must be > 0");
  if (t_warmup < 0) fail(ErrorCode::ValidationError, "t_warmup must be >= 0");
  if (total_steps <= t_warmup) fail(ErrorCode::ValidationError, "total_steps must exceed t_warmup");
}

double eval_schedule(const ScheduleSpec& spec, std::int64_t t) {
  check_step(spec, t);
  return eval_piece(spec, piece_at(spec, static_cast<double>(t)), t);
}

double left_limit(const ScheduleSpec& spec, std::int64_t t) {
  check_step(spec, t);
  return eval_piece(spec, piece_at(spec, static_cast<double>(t) - 0.5), t);
}

Discontinuity max_discontinuity(const ScheduleSpec& spec) {
  Discontinuity best;
  for (std::int64_t t = 1; t <= spec.total_steps; ++t) {
    const double gap = std::abs(eval_schedule(spec, t) - left_limit(spec, t));
    if (gap > best.gap) best = {t, gap};
  }
  return best;
}

Discontinuity max_step_change(const ScheduleSpec& spec) {
  Discontinuity best;
  double prev = eval_schedule(spec, 0);
  for (std::int64_t t = 1; t <= spec.total_steps; ++t) {
    const double cur = eval_schedule(spec, t);
    const double gap = std::abs(cur - prev);
    if (gap > best.gap) best = {t, gap};
    prev = cur;
  }
  return best;
}

std::vector<double> schedule_values(const ScheduleSpec& spec) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(spec.total_steps) + 1);
  for (std::int64_t t = 0; t <= spec.total_steps; ++t) out.push_back(eval_schedule(spec, t));
  return out;
}

void write_schedule_csv(const ScheduleSpec& spec, std::ostream& out) {
  out << "step,lr\n";
  char buf[64];
  for (std::int64_t t = 0; t <= spec.total_steps; ++t) {
    std::snprintf(buf, sizeof buf, "%lld,%.17g\n", static_cast<long long>(t), eval_schedule(spec, t));
    out << buf;
  }
}

void export_schedule(const ScheduleSpec& spec, const std::filesystem::path& path) {
  spec.validate();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IoFailure, "cannot open '" + path.string() + "' for writing");
  write_schedule_csv(spec, out);
  out.flush();
  if (!out) fail(ErrorCode::IoFailure, "write to '" + path.string() + "' failed");
}

}  // namespace optbench
