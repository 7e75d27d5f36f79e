#include "frontprop/randomness.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace frontprop {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

// 53-bit mantissa from two lanes, shifted by half an ulp so 0 and 1 are excluded.
inline double to_open_unit(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> c,
                                        std::array<std::uint32_t, 2> k) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, c[0], hi0, lo0);
    mulhilo(kMul1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kWeyl0;
    k[1] += kWeyl1;
  }
  return c;
}

std::array<std::uint32_t, 4> RandomField::block(Birthplace b, std::uint64_t event,
                                                Stream stream) const {
  // Counter layout: event index, site, particle index, stream family.
  const std::array<std::uint32_t, 4> counter = {
      static_cast<std::uint32_t>(event), static_cast<std::uint32_t>(static_cast<std::int32_t>(b.site)),
      static_cast<std::uint32_t>(b.index) ^ (static_cast<std::uint32_t>(event >> 32) << 16), stream.id()};
  const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed_),
                                            static_cast<std::uint32_t>(seed_ >> 32)};
  return philox4x32(counter, key);
}

WalkDraw RandomField::walk_draw(Birthplace b, std::uint64_t event, Stream stream) const {
  const auto out = block(b, event, stream);
  return {-0.5 * std::log(to_open_unit(out[0], out[1])), to_open_unit(out[2], out[3])};
}

double RandomField::draw(const StreamKey& key) const {
  const auto out = block(key.birthplace, key.event, key.stream);
  if (key.channel == Channel::clock) return -0.5 * std::log(to_open_unit(out[0], out[1]));
  return to_open_unit(out[2], out[3]);
}

double RandomField::auxiliary_uniform(std::uint32_t tag, std::uint64_t i, std::uint64_t j) const {
  const Birthplace b{static_cast<long>(static_cast<std::int32_t>(j)), static_cast<int>(j >> 32)};
  const auto out = block(b, i, Stream::auxiliary(tag));
  return to_open_unit(out[0], out[1]);
}

void validate_bias(double eps) {
  if (!(eps >= 0.0 && eps < 0.5)) {
    throw std::invalid_argument("bias eps must lie in [0, 1/2), got " + std::to_string(eps));
  }
}

int step_sign(double u, double eps) {
  validate_bias(eps);
  return step_sign_unchecked(u, eps);
}

Trajectory walk_path(const RandomField& field, Birthplace b, double eps, const WalkBudget& budget,
                     Stream stream) {
  validate_bias(eps);
  if (!budget.steps && !budget.horizon) throw std::invalid_argument("walk_path: empty budget");
  Trajectory path;
  path.times.push_back(0.0);
  path.positions.push_back(0);
  double elapsed = 0.0;
  long position = 0;
  for (std::uint64_t n = 1;; ++n) {
    if (budget.steps && n > *budget.steps) {
      path.budget_exhausted = budget.horizon.has_value();
      break;
    }
    const WalkDraw d = field.walk_draw(b, n, stream);
    elapsed += d.clock;
    if (budget.horizon && elapsed > *budget.horizon) break;
    position += step_sign_unchecked(d.step_unif, eps);
    path.times.push_back(elapsed);
    path.positions.push_back(position);
  }
  return path;
}

}  // namespace frontprop
