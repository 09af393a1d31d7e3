#include "phs3/fourier.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <shared_mutex>

namespace phs3 {

namespace {

// Plans are cached per (size, direction); FFTW planning is not thread-safe,
// so creation takes the exclusive lock while execution shares it.
std::shared_mutex& plan_mutex() {
    static std::shared_mutex m;
    return m;
}

fftw_plan cached_plan(std::size_t n, int sign) {
    static std::map<std::pair<std::size_t, int>, fftw_plan> cache;
    const auto key = std::make_pair(n, sign);
    {
        std::shared_lock<std::shared_mutex> lock(plan_mutex());
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    std::unique_lock<std::shared_mutex> lock(plan_mutex());
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    // UNALIGNED lets one plan serve arbitrary caller buffers via execute_dft
    std::vector<complexd> a(n), b(n);
    fftw_plan plan =
        fftw_plan_dft_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(a.data()),
                         reinterpret_cast<fftw_complex*>(b.data()), sign,
                         FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan == nullptr) throw resource_error("fft: plan creation failed");
    cache.emplace(key, plan);
    return plan;
}

std::vector<complexd> run_fft(const std::vector<complexd>& x, int sign) {
    const std::size_t n = x.size();
    if (n == 0) throw validation_error("fft: empty input");
    fftw_plan plan = cached_plan(n, sign);
    std::vector<complexd> in(x), out(n);
    std::shared_lock<std::shared_mutex> lock(plan_mutex());
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

// signed mode index in [-n/2, n/2); j = n/2 maps to the negative Nyquist
long mode_index(std::size_t j, std::size_t n) {
    const long jj = static_cast<long>(j);
    const long nn = static_cast<long>(n);
    return 2 * jj < nn ? jj : jj - nn;
}

void check_period(double period) {
    if (!(period > 0.0)) throw validation_error("spectral transform: period must be positive");
}

std::vector<complexd> to_complex(const std::vector<double>& f) {
    std::vector<complexd> g(f.size());
    for (std::size_t j = 0; j < f.size(); ++j) g[j] = complexd(f[j], 0.0);
    return g;
}

std::vector<double> to_real(const std::vector<complexd>& f) {
    std::vector<double> g(f.size());
    for (std::size_t j = 0; j < f.size(); ++j) g[j] = f[j].real();
    return g;
}

}  // namespace

std::vector<complexd> fft_forward(const std::vector<complexd>& x) { return run_fft(x, FFTW_FORWARD); }

std::vector<complexd> fft_inverse(const std::vector<complexd>& x) {
    std::vector<complexd> out = run_fft(x, FFTW_BACKWARD);
    const double scale = 1.0 / static_cast<double>(x.size());
    for (auto& v : out) v *= scale;
    return out;
}

std::vector<complexd> spectral_derivative(const std::vector<complexd>& f, double period, int order) {
    check_period(period);
    if (order < 0) throw validation_error("spectral_derivative: order must be nonnegative");
    if (order == 0) return f;
    const std::size_t n = f.size();
    std::vector<complexd> hat = fft_forward(f);
    for (std::size_t j = 0; j < n; ++j) {
        const long m = mode_index(j, n);
        if (order % 2 == 1 && n % 2 == 0 && j == n / 2) {
            hat[j] = 0.0;
            continue;
        }
        const complexd ik(0.0, 2.0 * pi * static_cast<double>(m) / period);
        complexd factor(1.0, 0.0);
        for (int p = 0; p < order; ++p) factor *= ik;
        hat[j] *= factor;
    }
    return fft_inverse(hat);
}

std::vector<double> spectral_derivative(const std::vector<double>& f, double period, int order) {
    return to_real(spectral_derivative(to_complex(f), period, order));
}

std::vector<double> spectral_antiderivative(const std::vector<double>& f, double period) {
    check_period(period);
    const std::size_t n = f.size();
    if (n == 0) throw validation_error("spectral_antiderivative: empty input");
    std::vector<complexd> hat = fft_forward(to_complex(f));
    const double mean = hat[0].real() / static_cast<double>(n);
    hat[0] = 0.0;
    for (std::size_t j = 1; j < n; ++j) {
        if (n % 2 == 0 && j == n / 2) {
            hat[j] = 0.0;
            continue;
        }
        const long m = mode_index(j, n);
        hat[j] /= complexd(0.0, 2.0 * pi * static_cast<double>(m) / period);
    }
    std::vector<complexd> periodic = fft_inverse(hat);
    std::vector<double> out(n);
    const double h = period / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j)
        out[j] = mean * h * static_cast<double>(j) + periodic[j].real() - periodic[0].real();
    return out;
}

std::vector<complexd> spectral_resample(const std::vector<complexd>& f, std::size_t target_n) {
    const std::size_t n = f.size();
    if (n == 0 || target_n == 0) throw validation_error("spectral_resample: empty grid");
    if (target_n == n) return f;
    std::vector<complexd> hat = fft_forward(f);
    std::vector<complexd> out_hat(target_n, complexd(0.0, 0.0));
    const long half_out = static_cast<long>(target_n) / 2;
    auto deposit = [&](long m, complexd value) {
        if (m < -half_out || m > half_out - 1 + static_cast<long>(target_n % 2)) return;
        const std::size_t idx = m >= 0 ? static_cast<std::size_t>(m) : target_n - static_cast<std::size_t>(-m);
        out_hat[idx] += value;
    };
    for (std::size_t j = 0; j < n; ++j) {
        const long m = mode_index(j, n);
        if (n % 2 == 0 && j == n / 2 && target_n > n) {
            // split the Nyquist mode symmetrically when upsampling
            deposit(m, 0.5 * hat[j]);
            deposit(-m, 0.5 * hat[j]);
        } else {
            deposit(m, hat[j]);
        }
    }
    const double scale = static_cast<double>(target_n) / static_cast<double>(n);
    for (auto& v : out_hat) v *= scale;
    return fft_inverse(out_hat);
}

std::vector<double> spectral_resample(const std::vector<double>& f, std::size_t target_n) {
    return to_real(spectral_resample(to_complex(f), target_n));
}

std::vector<complexd> spectral_shift(const std::vector<complexd>& f, double period, double shift) {
    check_period(period);
    const std::size_t n = f.size();
    std::vector<complexd> hat = fft_forward(f);
    for (std::size_t j = 0; j < n; ++j) {
        const long m = mode_index(j, n);
        const double phase = 2.0 * pi * static_cast<double>(m) * shift / period;
        if (n % 2 == 0 && j == n / 2) {
            // cosine factor keeps real data real at the unpaired Nyquist mode
            hat[j] *= std::cos(phase);
        } else {
            hat[j] *= complexd(std::cos(phase), std::sin(phase));
        }
    }
    return fft_inverse(hat);
}

std::vector<double> spectral_shift(const std::vector<double>& f, double period, double shift) {
    return to_real(spectral_shift(to_complex(f), period, shift));
}

double periodic_mean(const std::vector<double>& f) {
    if (f.empty()) throw validation_error("periodic_mean: empty input");
    double acc = 0.0;
    for (double v : f) acc += v;
    return acc / static_cast<double>(f.size());
}

}  // namespace phs3
