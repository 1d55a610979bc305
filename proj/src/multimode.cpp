#include "mbloch/multimode.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

#include "mbloch/csv.hpp"

namespace mbloch {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

bool is_pow2(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

// FFTW plan creation/destruction is not thread safe; execution on plans
// owned by different objects is.
std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

// Complex 1-d FFT working on an owned buffer.
class Fft {
public:
    explicit Fft(std::size_t n) : n_(n) {
        std::lock_guard lock(plan_mutex());
        buf_ = fftw_alloc_complex(n);
        fwd_ = fftw_plan_dft_1d(static_cast<int>(n), buf_, buf_, FFTW_FORWARD,
                                FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_1d(static_cast<int>(n), buf_, buf_, FFTW_BACKWARD,
                                FFTW_ESTIMATE);
    }
    ~Fft() {
        std::lock_guard lock(plan_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
        fftw_free(buf_);
    }
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    // samples -> coefficients with 1/n normalization (bin k holds F_m for
    // m = k, folded: k >= n/2 means m = k - n).
    void forward(const std::complex<double>* in, std::complex<double>* out) {
        auto* b = reinterpret_cast<std::complex<double>*>(buf_);
        std::copy(in, in + n_, b);
        fftw_execute(fwd_);
        double inv = 1.0 / static_cast<double>(n_);
        for (std::size_t i = 0; i < n_; ++i) out[i] = b[i] * inv;
    }

    // coefficients -> samples (unnormalized inverse matches the 1/n above).
    void backward(const std::complex<double>* in, std::complex<double>* out) {
        auto* b = reinterpret_cast<std::complex<double>*>(buf_);
        std::copy(in, in + n_, b);
        fftw_execute(bwd_);
        std::copy(b, b + n_, out);
    }

private:
    std::size_t n_;
    fftw_complex* buf_;
    fftw_plan fwd_, bwd_;
};

int fold_mode(std::size_t k, std::size_t n) {
    return k < n / 2 ? static_cast<int>(k)
                     : static_cast<int>(k) - static_cast<int>(n);
}

} // namespace

FieldOnRing FieldOnRing::uniform(std::complex<double> value, std::size_t n_z,
                                 double L_m, double L_c, double c) {
    FieldOnRing f;
    f.samples.assign(n_z, value);
    f.L_m = L_m;
    f.L_c = L_c;
    f.c = c;
    f.validate();
    return f;
}

void FieldOnRing::validate() const {
    if (!is_pow2(samples.size())) {
        std::size_t up = 2;
        while (up < samples.size()) up <<= 1;
        throw std::invalid_argument(
            "FieldOnRing: n_z must be a power of two (got " +
            std::to_string(samples.size()) + "; use " + std::to_string(up) +
            ")");
    }
    if (!(L_m > 0.0 && L_c >= L_m && c > 0.0))
        throw std::invalid_argument("FieldOnRing: need 0 < L_m <= L_c, c > 0");
}

ModeSpectrum mode_decompose(const FieldOnRing& field) {
    field.validate();
    std::size_t n = field.size();
    Fft fft(n);
    std::vector<std::complex<double>> bins(n);
    fft.forward(field.samples.data(), bins.data());

    ModeSpectrum spec;
    spec.L_m = field.L_m;
    spec.L_c = field.L_c;
    spec.c = field.c;
    spec.m.resize(n);
    spec.coeff.resize(n);
    spec.q.resize(n);
    spec.k_phys.resize(n);
    spec.omega.resize(n);
    // Order by ascending m in [-n/2, n/2).
    for (std::size_t i = 0; i < n; ++i) {
        int m = static_cast<int>(i) - static_cast<int>(n / 2);
        std::size_t k = (i + n / 2) % n; // FFT bin holding mode m
        spec.m[i] = m;
        spec.coeff[i] = bins[k];
        spec.q[i] = two_pi * m / field.L_m;
        spec.k_phys[i] = two_pi * m / field.L_c;
        spec.omega[i] = m * two_pi * field.c / field.L_c;
    }
    return spec;
}

FieldOnRing mode_reconstruct(const ModeSpectrum& spectrum) {
    std::size_t n = spectrum.m.size();
    if (!is_pow2(n))
        throw std::invalid_argument("mode_reconstruct: invalid spectrum size");
    std::vector<std::complex<double>> bins(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t k =
            static_cast<std::size_t>((spectrum.m[i] + static_cast<int>(n)) %
                                     static_cast<int>(n));
        bins[k] = spectrum.coeff[i];
    }
    FieldOnRing field;
    field.L_m = spectrum.L_m;
    field.L_c = spectrum.L_c;
    field.c = spectrum.c;
    field.samples.resize(n);
    Fft fft(n);
    fft.backward(bins.data(), field.samples.data());
    return field;
}

std::vector<double> empty_cavity_frequencies(const CavityParams& cav,
                                             int m_min, int m_max) {
    cav.validate();
    if (m_min > m_max)
        throw std::invalid_argument("empty_cavity_frequencies: empty range");
    std::vector<double> omega;
    omega.reserve(static_cast<std::size_t>(m_max - m_min + 1));
    for (int m = m_min; m <= m_max; ++m)
        omega.push_back(m * cav.free_spectral_range());
    return omega;
}

TravelingWaveTrajectory integrate_traveling_wave(
    const FieldOnRing& F0, const std::vector<std::complex<double>>& P0,
    const std::vector<double>& D0, const SingleModeParams& p, double t_end,
    const ode::Options& opts) {
    F0.validate();
    const std::size_t n = F0.size();
    if (P0.size() != n || D0.size() != n)
        throw std::invalid_argument(
            "integrate_traveling_wave: matter fields must share the field grid");
    if (!(p.kappa >= 0.0 && p.gamma_perp >= 0.0 && p.gamma_par >= 0.0))
        throw std::invalid_argument(
            "integrate_traveling_wave: rates must be >= 0");

    // Spectral resolution guard: initial data must not populate the top
    // third of the mode range.
    {
        auto spec = mode_decompose(F0);
        double peak = 0.0;
        for (const auto& cfft : spec.coeff) peak = std::max(peak, std::abs(cfft));
        if (peak > 0.0) {
            for (std::size_t i = 0; i < n; ++i) {
                if (std::abs(spec.m[i]) < static_cast<int>(n / 3)) continue;
                if (std::abs(spec.coeff[i]) > 1e-8 * peak)
                    throw std::invalid_argument(
                        "integrate_traveling_wave: initial field is not "
                        "resolved on this grid; use n_z = " +
                        std::to_string(2 * n));
            }
        }
    }

    const double v = F0.v();
    std::vector<double> vq(n);
    for (std::size_t k = 0; k < n; ++k)
        vq[k] = v * two_pi * fold_mode(k, n) / F0.L_m;

    Fft fft(n);
    // State layout: [Re G | Im G | Re P | Im P | D], G in FFT bin order.
    // G_m(t) = F_m(t) e^{+i v q_m t} removes the advection phase, so pure
    // transport leaves G constant and the stepper only sees the matter
    // coupling.
    std::vector<std::complex<double>> work1(n), work2(n);

    auto rhs = [&](double t, const std::vector<double>& y,
                   std::vector<double>& dy) {
        // F_m = G_m e^{-i v q_m t} -> physical F
        for (std::size_t k = 0; k < n; ++k) {
            std::complex<double> G(y[k], y[n + k]);
            work1[k] = G * std::polar(1.0, -vq[k] * t);
        }
        fft.backward(work1.data(), work2.data());
        // Local coupling at each grid point
        for (std::size_t j = 0; j < n; ++j) {
            std::complex<double> F = work2[j];
            std::complex<double> P(y[2 * n + j], y[3 * n + j]);
            double D = y[4 * n + j];
            work1[j] = p.kappa * (P - F); // dF (before advection phase)
            std::complex<double> dP =
                p.gamma_perp *
                (F * D - std::complex<double>(1.0, p.Delta_c) * P);
            double dD =
                p.gamma_par * (p.r - D - std::real(F * std::conj(P)));
            dy[2 * n + j] = dP.real();
            dy[3 * n + j] = dP.imag();
            dy[4 * n + j] = dD;
        }
        fft.forward(work1.data(), work2.data());
        for (std::size_t k = 0; k < n; ++k) {
            std::complex<double> dG = work2[k] * std::polar(1.0, vq[k] * t);
            dy[k] = dG.real();
            dy[n + k] = dG.imag();
        }
    };

    std::vector<double> y0(5 * n);
    fft.forward(F0.samples.data(), work1.data());
    for (std::size_t k = 0; k < n; ++k) {
        y0[k] = work1[k].real();
        y0[n + k] = work1[k].imag();
    }
    for (std::size_t j = 0; j < n; ++j) {
        y0[2 * n + j] = P0[j].real();
        y0[3 * n + j] = P0[j].imag();
        y0[4 * n + j] = D0[j];
    }

    auto raw = ode::integrate(rhs, std::move(y0), 0.0, t_end, opts);

    TravelingWaveTrajectory traj;
    traj.status = raw.status;
    traj.message = std::move(raw.message);
    traj.times = raw.times;
    traj.F.reserve(raw.states.size());
    traj.P.reserve(raw.states.size());
    traj.D.reserve(raw.states.size());
    for (std::size_t s = 0; s < raw.states.size(); ++s) {
        const auto& y = raw.states[s];
        double t = raw.times[s];
        for (std::size_t k = 0; k < n; ++k) {
            std::complex<double> G(y[k], y[n + k]);
            work1[k] = G * std::polar(1.0, -vq[k] * t);
        }
        std::vector<std::complex<double>> F(n), P(n);
        std::vector<double> D(n);
        fft.backward(work1.data(), F.data());
        for (std::size_t j = 0; j < n; ++j) {
            P[j] = {y[2 * n + j], y[3 * n + j]};
            D[j] = y[4 * n + j];
        }
        traj.F.push_back(std::move(F));
        traj.P.push_back(std::move(P));
        traj.D.push_back(std::move(D));
    }
    return traj;
}

void write_csv(std::ostream& os, const TravelingWaveTrajectory& traj) {
    std::size_t n = traj.F.empty() ? 0 : traj.F.front().size();
    std::vector<std::string> names;
    names.emplace_back("t");
    for (std::size_t j = 0; j < n; ++j) {
        names.push_back("re_F_" + std::to_string(j));
        names.push_back("im_F_" + std::to_string(j));
    }
    csv::header(os, names);
    std::vector<double> row(1 + 2 * n);
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        row[0] = traj.times[s];
        for (std::size_t j = 0; j < n; ++j) {
            row[1 + 2 * j] = traj.F[s][j].real();
            row[2 + 2 * j] = traj.F[s][j].imag();
        }
        csv::row(os, row);
    }
}

void write_csv(std::ostream& os, const ModeSpectrum& spectrum) {
    std::vector<std::string> names{"m", "re_F_m", "im_F_m", "q", "k_phys",
                                   "omega"};
    csv::header(os, names);
    for (std::size_t i = 0; i < spectrum.m.size(); ++i) {
        double vals[] = {static_cast<double>(spectrum.m[i]),
                         spectrum.coeff[i].real(), spectrum.coeff[i].imag(),
                         spectrum.q[i], spectrum.k_phys[i], spectrum.omega[i]};
        csv::row(os, vals);
    }
}

} // namespace mbloch
