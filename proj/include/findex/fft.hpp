#pragma once

#include <complex>
#include <vector>

namespace findex {

// Real-input DFT helpers backed by FFTW3. Plans use FFTW_ESTIMATE so the
// algorithm choice (and therefore the exact floating-point result) is stable
// across runs, which the deterministic-output contract relies on.

// Forward transform; returns n/2+1 non-redundant coefficients.
std::vector<std::complex<double>> rfft(const std::vector<double>& x);

// Inverse of rfft for an original length n; scaled by 1/n so
// irfft(rfft(x), x.size()) == x up to rounding.
std::vector<double> irfft(const std::vector<std::complex<double>>& spec, size_t n);

}  // namespace findex
