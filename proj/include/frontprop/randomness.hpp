#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace frontprop {

/// Birthplace label (x, i) of a walk: the site where it was born and its index there.
struct Birthplace {
  long site = 0;
  int index = 1;

  friend auto operator<=>(const Birthplace&, const Birthplace&) = default;
};

/// Which family of i.i.d. draws a key refers to. `base` is the family driving the
/// process itself; `fresh(j)` is the independent copy indexed by block j used when
/// hitting times are decoupled. `auxiliary(tag)` serves experiment-level sampling
/// (synthetic laws, bootstrap), disjoint from both.
class Stream {
 public:
  static constexpr Stream base() { return Stream(0); }
  static constexpr Stream fresh(std::uint32_t block) { return Stream(block + 1); }
  static constexpr Stream auxiliary(std::uint32_t tag) { return Stream(0x80000000u | tag); }

  constexpr std::uint32_t id() const { return id_; }
  constexpr bool is_base() const { return id_ == 0; }

  friend constexpr bool operator==(Stream, Stream) = default;

 private:
  explicit constexpr Stream(std::uint32_t id) : id_(id) {}
  std::uint32_t id_;
};

enum class Channel : std::uint8_t { clock, step };

/// Address of one draw in the field: the n-th clock or step variable of walk (x, i)
/// in a given stream family.
struct StreamKey {
  Birthplace birthplace;
  std::uint64_t event = 1;  // n >= 1
  Channel channel = Channel::clock;
  Stream stream = Stream::base();
};

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Maps a 128-bit
/// counter under a 64-bit key to 128 pseudorandom bits.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// One clock/step pair of a walk. Both come from the same Philox block: lanes 0-1
/// feed the clock uniform, lanes 2-3 the step uniform.
struct WalkDraw {
  double clock;      // Exponential(2)
  double step_unif;  // Uniform(0,1)
};

/// Keyed random field realizing the i.i.d. family (tau_n(x,i), U_n(x,i)) and its
/// fresh copies. Stateless: every value is a pure function of (seed, key).
class RandomField {
 public:
  explicit RandomField(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  /// Clock channel returns -ln(u)/2, step channel the raw uniform.
  double draw(const StreamKey& key) const;

  /// Both draws of event n of a walk with a single generator call.
  WalkDraw walk_draw(Birthplace b, std::uint64_t event, Stream stream = Stream::base()) const;

  /// Uniform in (0,1) on an auxiliary lane, addressed by (tag, i, j).
  double auxiliary_uniform(std::uint32_t tag, std::uint64_t i, std::uint64_t j = 0) const;

 private:
  std::array<std::uint32_t, 4> block(Birthplace b, std::uint64_t event, Stream stream) const;

  std::uint64_t seed_;
};

/// +1 iff u <= 1/2 + eps. Throws std::invalid_argument unless 0 <= eps < 1/2.
int step_sign(double u, double eps);

/// Unchecked variant for inner loops where eps has already been validated.
inline int step_sign_unchecked(double u, double eps) { return u <= 0.5 + eps ? 1 : -1; }

void validate_bias(double eps);

struct WalkBudget {
  std::optional<std::uint64_t> steps;
  std::optional<double> horizon;
};

/// Jump times and positions of one walk in its own frame: starts at (0, 0).
struct Trajectory {
  std::vector<double> times;
  std::vector<long> positions;
  bool budget_exhausted = false;  // horizon not reached when the step budget ran out
};

Trajectory walk_path(const RandomField& field, Birthplace b, double eps, const WalkBudget& budget,
                     Stream stream = Stream::base());

}  // namespace frontprop
