#pragma once

#include <cstddef>
#include <vector>

#include "phs3/common.hpp"

namespace phs3 {

// Spectral utilities on uniform periodic grids: data vectors hold one full
// period sampled at s_j = j L / N.

std::vector<complexd> fft_forward(const std::vector<complexd>& x);
std::vector<complexd> fft_inverse(const std::vector<complexd>& x);

// order-th derivative; the Nyquist mode is zeroed for odd orders so real
// input stays real
std::vector<complexd> spectral_derivative(const std::vector<complexd>& f, double period, int order = 1);
std::vector<double> spectral_derivative(const std::vector<double>& f, double period, int order = 1);

// antiderivative F with F(0) = 0; the mean of f contributes the linear term
// mean * s, the rest is periodic
std::vector<double> spectral_antiderivative(const std::vector<double>& f, double period);

// trigonometric interpolation onto target_n uniform nodes over the same period
std::vector<complexd> spectral_resample(const std::vector<complexd>& f, std::size_t target_n);
std::vector<double> spectral_resample(const std::vector<double>& f, std::size_t target_n);

// g_j ~ f(s_j + shift)
std::vector<complexd> spectral_shift(const std::vector<complexd>& f, double period, double shift);
std::vector<double> spectral_shift(const std::vector<double>& f, double period, double shift);

double periodic_mean(const std::vector<double>& f);

}  // namespace phs3
