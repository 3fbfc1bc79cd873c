#include <array>

#include "qfoundry/errors.hpp"
#include "qfoundry/hvmodels.hpp"
#include "qfoundry/rng.hpp"

namespace qfoundry::hv {
namespace {

std::uint64_t shard_size(std::uint64_t samples, std::uint64_t shard) {
  return samples / kSamplerShards + (shard < samples % kSamplerShards ? 1 : 0);
}

OutcomeSums run_shard(const LeggettThresholds& t, std::uint64_t count, std::uint64_t seed, std::uint64_t shard) {
  rng::Engine engine = rng::substream(seed, shard);
  OutcomeSums s;
  for (std::uint64_t i = 0; i < count; ++i) {
    const double lambda = rng::uniform01(engine);
    const int a = lambda <= t.lambda_a ? 1 : -1;
    const int b = (lambda >= t.x1 && lambda <= t.x2) ? 1 : -1;
    s.sum_a += a;
    s.sum_b += b;
    s.sum_ab += a * b;
  }
  s.count = count;
  return s;
}

LeggettThresholds checked_thresholds(const LeggettModelParams& params) {
  // leggett_outcomes carries the validation and the error message.
  leggett_outcomes(params, 0.0);
  return leggett_thresholds(params);
}

void merge(OutcomeSums& into, const OutcomeSums& s) {
  into.sum_a += s.sum_a;
  into.sum_b += s.sum_b;
  into.sum_ab += s.sum_ab;
  into.count += s.count;
}

}  // namespace

OutcomeSums sample_leggett_serial(const LeggettModelParams& params, std::uint64_t samples, std::uint64_t seed) {
  const LeggettThresholds t = checked_thresholds(params);
  OutcomeSums total;
  for (std::uint64_t shard = 0; shard < kSamplerShards; ++shard) {
    merge(total, run_shard(t, shard_size(samples, shard), seed, shard));
  }
  return total;
}

OutcomeSums sample_leggett_omp(const LeggettModelParams& params, std::uint64_t samples, std::uint64_t seed) {
  const LeggettThresholds t = checked_thresholds(params);
  std::array<OutcomeSums, kSamplerShards> parts{};
#pragma omp parallel for schedule(static)
  for (std::int64_t shard = 0; shard < static_cast<std::int64_t>(kSamplerShards); ++shard) {
    const auto k = static_cast<std::uint64_t>(shard);
    parts[k] = run_shard(t, shard_size(samples, k), seed, k);
  }
  OutcomeSums total;
  for (const auto& p : parts) merge(total, p);
  return total;
}

}  // namespace qfoundry::hv
