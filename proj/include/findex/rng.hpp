#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace findex {

// Deterministic random source. All randomness in the toolkit flows through
// this class so that a (seed, generator-id) pair fully determines every
// output byte. std::distributions are avoided on purpose: their streams are
// not pinned by the standard, while the raw mt19937_64 sequence is.
class Rng {
  public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    // Uniform double in [0, 1) with 53 random bits.
    double uniform();

    // Standard normal via polar Box-Muller (pair cached).
    double gaussian();

    // Uniform integer in [0, n), rejection-sampled, unbiased. n >= 1.
    uint64_t below(uint64_t n);

    // In-place Fisher-Yates.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

  private:
    std::mt19937_64 eng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace findex
