#ifndef LAR_RNG_HPP
#define LAR_RNG_HPP

#include <cstdint>

#include "lar/linalg.hpp"

namespace lar {

// xorshift64* stream. Fixed here (rather than std::mt19937) so that scenario files
// replay to identical matrices in any language that reimplements these few lines:
//   s ^= s >> 12; s ^= s << 25; s ^= s >> 27; return s * 2685821657736338717
// uniform doubles take the top 53 bits: (x >> 11) * 2^-53, mapped to [-1, 1).
class XorShift64 {
  public:
    explicit XorShift64(std::uint64_t seed)
        : state_(seed ? seed : 0x9E3779B97F4A7C15ull) {}

    std::uint64_t next_u64() {
        std::uint64_t s = state_;
        s ^= s >> 12;
        s ^= s << 25;
        s ^= s >> 27;
        state_ = s;
        return s * 2685821657736338717ull;
    }

    double next_unit() {  // [0, 1)
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double next_symmetric() {  // [-1, 1)
        return 2.0 * next_unit() - 1.0;
    }

  private:
    std::uint64_t state_;
};

enum class MatrixFamily { General, Symmetric, Skew };

// Entries drawn row-major from uniform[-1,1), scaled, then projected onto the family.
inline Mat random_matrix(XorShift64& rng, std::size_t n, MatrixFamily family,
                         double scale = 1.0) {
    Mat g(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) g(i, j) = scale * rng.next_symmetric();
    if (family == MatrixFamily::General) return g;
    Mat out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            out(i, j) = (family == MatrixFamily::Symmetric) ? 0.5 * (g(i, j) + g(j, i))
                                                            : 0.5 * (g(i, j) - g(j, i));
    return out;
}

inline Vec random_vector(XorShift64& rng, std::size_t n, double scale = 1.0) {
    Vec v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = scale * rng.next_symmetric();
    return v;
}

}  // namespace lar

#endif
