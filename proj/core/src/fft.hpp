#pragma once

#include <complex>

namespace phasespace::detail {

enum class DftSign { forward = -1, backward = 1 };

/// In-place unnormalised DFTs of `count` contiguous blocks of `length` points:
///   x[k] <- sum_j x[j] exp(sign * 2 pi i j k / length).
/// Plans are cached and shared; execution is safe from concurrent threads.
void dft_blocks(std::complex<double>* data, int length, int count, DftSign sign);

}  // namespace phasespace::detail
