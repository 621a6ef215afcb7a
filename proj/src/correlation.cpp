#include "ftlr/correlation.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace ftlr {

namespace detail {

void validate_correlation_inputs(const FeatureMap& templ, const FeatureMap& search)
{
    if (templ.channels < 1 || templ.channels != search.channels)
        throw std::invalid_argument("cross_correlate: template and search channel counts differ");
    if (templ.height >= search.height || templ.width >= search.width)
        throw std::invalid_argument("cross_correlate: template must be strictly smaller than search");
    if (templ.height < 1 || templ.width < 1)
        throw std::invalid_argument("cross_correlate: empty template");
}

ResponseMap empty_response(const FeatureMap& templ, const FeatureMap& search)
{
    ResponseMap r;
    r.height = search.height - templ.height + 1;
    r.width = search.width - templ.width + 1;
    r.values.assign(static_cast<std::size_t>(r.height) * r.width, 0.0);
    r.center_row = 0.5 * (r.height - 1);
    r.center_col = 0.5 * (r.width - 1);
    return r;
}

} // namespace detail

namespace {

constexpr double kRelativeVarianceFloor = 1e-10;

struct TemplateStats {
    std::vector<double> centered; // per channel, Ht*Wt each
    std::vector<double> norm;     // per channel; 0 when the channel is constant
};

TemplateStats template_stats(const FeatureMap& t)
{
    const int n = t.height * t.width;
    TemplateStats s;
    s.centered.resize(static_cast<std::size_t>(n) * t.channels);
    s.norm.assign(t.channels, 0.0);
    for (int c = 0; c < t.channels; ++c) {
        double sum = 0.0, sum_sq = 0.0;
        for (int i = 0; i < n; ++i) {
            const double v = t.values[static_cast<std::size_t>(i) * t.channels + c];
            sum += v;
            sum_sq += v * v;
        }
        const double mean = sum / n;
        double energy = 0.0;
        double* dst = s.centered.data() + static_cast<std::size_t>(c) * n;
        for (int i = 0; i < n; ++i) {
            dst[i] = t.values[static_cast<std::size_t>(i) * t.channels + c] - mean;
            energy += dst[i] * dst[i];
        }
        if (energy > kRelativeVarianceFloor * sum_sq)
            s.norm[c] = std::sqrt(energy);
    }
    return s;
}

inline double normalized(double numerator, double window_sum, double window_sum_sq, double n, double template_norm)
{
    if (template_norm == 0.0)
        return 0.0;
    const double variance = window_sum_sq - window_sum * window_sum / n;
    if (!(variance > kRelativeVarianceFloor * window_sum_sq))
        return 0.0;
    return numerator / (template_norm * std::sqrt(variance));
}

// --- FFTW plumbing -------------------------------------------------------

struct FftwDeleter {
    void operator()(void* p) const { fftw_free(p); }
};
using RealBuffer = std::unique_ptr<double[], FftwDeleter>;
using ComplexBuffer = std::unique_ptr<fftw_complex[], FftwDeleter>;

RealBuffer alloc_real(std::size_t n) { return RealBuffer(fftw_alloc_real(n)); }
ComplexBuffer alloc_complex(std::size_t n) { return ComplexBuffer(fftw_alloc_complex(n)); }

struct PlanPair {
    fftw_plan forward = nullptr;
    fftw_plan inverse = nullptr;
};

// The FFTW planner is not thread-safe; execution of an existing plan on new
// arrays is.
const PlanPair& plans_for(int rows, int cols)
{
    static std::mutex mutex;
    static std::map<std::pair<int, int>, PlanPair> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find({rows, cols});
    if (it != cache.end())
        return it->second;
    const std::size_t real_n = static_cast<std::size_t>(rows) * cols;
    const std::size_t complex_n = static_cast<std::size_t>(rows) * (cols / 2 + 1);
    RealBuffer real = alloc_real(real_n);
    ComplexBuffer spectrum = alloc_complex(complex_n);
    PlanPair plans;
    plans.forward = fftw_plan_dft_r2c_2d(rows, cols, real.get(), spectrum.get(), FFTW_ESTIMATE);
    plans.inverse = fftw_plan_dft_c2r_2d(rows, cols, spectrum.get(), real.get(), FFTW_ESTIMATE);
    if (plans.forward == nullptr || plans.inverse == nullptr)
        throw std::runtime_error("FFTW planning failed");
    return cache.emplace(std::make_pair(rows, cols), plans).first->second;
}

// Inclusive prefix sums with a zero border: (H+1) x (W+1).
void integral_images(const FeatureMap& s, int c, std::vector<double>& sum, std::vector<double>& sum_sq)
{
    const int W1 = s.width + 1;
    sum.assign(static_cast<std::size_t>(s.height + 1) * W1, 0.0);
    sum_sq.assign(sum.size(), 0.0);
    for (int y = 0; y < s.height; ++y) {
        double row = 0.0, row_sq = 0.0;
        for (int x = 0; x < s.width; ++x) {
            const double v = s.at(y, x, c);
            row += v;
            row_sq += v * v;
            const std::size_t i = static_cast<std::size_t>(y + 1) * W1 + x + 1;
            sum[i] = sum[i - W1] + row;
            sum_sq[i] = sum_sq[i - W1] + row_sq;
        }
    }
}

inline double box_sum(const std::vector<double>& ii, int W1, int y, int x, int h, int w)
{
    const std::size_t a = static_cast<std::size_t>(y) * W1 + x;
    const std::size_t b = static_cast<std::size_t>(y) * W1 + x + w;
    const std::size_t c = static_cast<std::size_t>(y + h) * W1 + x;
    const std::size_t d = static_cast<std::size_t>(y + h) * W1 + x + w;
    return ii[d] - ii[b] - ii[c] + ii[a];
}

} // namespace

int fft_friendly_size(int n)
{
    if (n < 1)
        throw std::invalid_argument("fft_friendly_size: n must be positive");
    for (int m = n;; ++m) {
        int r = m;
        for (int p : {2, 3, 5})
            while (r % p == 0)
                r /= p;
        if (r == 1)
            return m;
    }
}

ResponseMap cross_correlate(const FeatureMap& templ, const FeatureMap& search, CorrelationMethod method)
{
    if (method == CorrelationMethod::Auto) {
        const double direct_cost = static_cast<double>(templ.height) * templ.width *
                                   (search.height - templ.height + 1) * (search.width - templ.width + 1);
        method = direct_cost > 4.0e5 ? CorrelationMethod::Fft : CorrelationMethod::Direct;
    }
    return method == CorrelationMethod::Fft ? cross_correlate_fft(templ, search)
                                            : cross_correlate_direct(templ, search);
}

ResponseMap cross_correlate_direct(const FeatureMap& templ, const FeatureMap& search)
{
    detail::validate_correlation_inputs(templ, search);
    ResponseMap r = detail::empty_response(templ, search);
    const TemplateStats ts = template_stats(templ);
    const int C = templ.channels;
    const int Ht = templ.height, Wt = templ.width;
    const double n = static_cast<double>(Ht) * Wt;

#pragma omp parallel for schedule(static)
    for (int u = 0; u < r.height; ++u) {
        for (int v = 0; v < r.width; ++v) {
            double total = 0.0;
            for (int c = 0; c < C; ++c) {
                const double* t = ts.centered.data() + static_cast<std::size_t>(c) * Ht * Wt;
                double num = 0.0, sum = 0.0, sum_sq = 0.0;
                for (int i = 0; i < Ht; ++i) {
                    for (int j = 0; j < Wt; ++j) {
                        const double s = search.at(u + i, v + j, c);
                        num += t[i * Wt + j] * s;
                        sum += s;
                        sum_sq += s * s;
                    }
                }
                total += normalized(num, sum, sum_sq, n, ts.norm[c]);
            }
            r.at(u, v) = total / C;
        }
    }
    return r;
}

ResponseMap cross_correlate_fft(const FeatureMap& templ, const FeatureMap& search)
{
    detail::validate_correlation_inputs(templ, search);
    ResponseMap r = detail::empty_response(templ, search);
    const TemplateStats ts = template_stats(templ);
    const int C = templ.channels;
    const int Ht = templ.height, Wt = templ.width;
    const int rows = fft_friendly_size(search.height);
    const int cols = fft_friendly_size(search.width);
    const int half = cols / 2 + 1;
    const std::size_t real_n = static_cast<std::size_t>(rows) * cols;
    const std::size_t complex_n = static_cast<std::size_t>(rows) * half;
    const double n = static_cast<double>(Ht) * Wt;
    const double scale = 1.0 / static_cast<double>(real_n);
    const PlanPair& plans = plans_for(rows, cols);
    const std::size_t out_n = r.values.size();

    // Per-channel results are summed afterwards in channel order so the output
    // does not depend on the thread count.
    std::vector<double> per_channel(out_n * C, 0.0);

#pragma omp parallel for schedule(static)
    for (int c = 0; c < C; ++c) {
        double* dst = per_channel.data() + out_n * c;
        if (ts.norm[c] == 0.0)
            continue;
        RealBuffer t_buf = alloc_real(real_n);
        RealBuffer s_buf = alloc_real(real_n);
        ComplexBuffer t_hat = alloc_complex(complex_n);
        ComplexBuffer s_hat = alloc_complex(complex_n);
        std::fill(t_buf.get(), t_buf.get() + real_n, 0.0);
        std::fill(s_buf.get(), s_buf.get() + real_n, 0.0);
        const double* t = ts.centered.data() + static_cast<std::size_t>(c) * Ht * Wt;
        for (int i = 0; i < Ht; ++i)
            for (int j = 0; j < Wt; ++j)
                t_buf[static_cast<std::size_t>(i) * cols + j] = t[i * Wt + j];
        for (int i = 0; i < search.height; ++i)
            for (int j = 0; j < search.width; ++j)
                s_buf[static_cast<std::size_t>(i) * cols + j] = search.at(i, j, c);

        fftw_execute_dft_r2c(plans.forward, t_buf.get(), t_hat.get());
        fftw_execute_dft_r2c(plans.forward, s_buf.get(), s_hat.get());
        for (std::size_t k = 0; k < complex_n; ++k) {
            const double a = t_hat[k][0], b = t_hat[k][1];
            const double x = s_hat[k][0], y = s_hat[k][1];
            // conj(T) * S
            s_hat[k][0] = a * x + b * y;
            s_hat[k][1] = a * y - b * x;
        }
        fftw_execute_dft_c2r(plans.inverse, s_hat.get(), s_buf.get());

        std::vector<double> ii, ii_sq;
        integral_images(search, c, ii, ii_sq);
        const int W1 = search.width + 1;
        for (int u = 0; u < r.height; ++u) {
            for (int v = 0; v < r.width; ++v) {
                const double num = s_buf[static_cast<std::size_t>(u) * cols + v] * scale;
                const double sum = box_sum(ii, W1, u, v, Ht, Wt);
                const double sum_sq = box_sum(ii_sq, W1, u, v, Ht, Wt);
                dst[static_cast<std::size_t>(u) * r.width + v] = normalized(num, sum, sum_sq, n, ts.norm[c]);
            }
        }
    }

    for (std::size_t k = 0; k < out_n; ++k) {
        double total = 0.0;
        for (int c = 0; c < C; ++c)
            total += per_channel[out_n * c + k];
        r.values[k] = total / C;
    }
    return r;
}

std::vector<double> hann_window(int n)
{
    if (n < 1)
        throw std::invalid_argument("hann_window: n must be positive");
    std::vector<double> w(n, 1.0);
    if (n == 1)
        return w;
    for (int i = 0; i < n; ++i)
        w[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * i / (n - 1)));
    return w;
}

ResponseMap apply_motion_window(const ResponseMap& response, double strength)
{
    if (!(strength >= 0.0 && strength <= 1.0))
        throw std::invalid_argument("apply_motion_window: strength must lie in [0,1]");
    if (strength == 0.0)
        return response;
    const std::vector<double> wy = hann_window(response.height);
    const std::vector<double> wx = hann_window(response.width);
    ResponseMap out = response;
    for (int r = 0; r < out.height; ++r)
        for (int c = 0; c < out.width; ++c) {
            const double v = response.at(r, c);
            out.at(r, c) = (1.0 - strength) * v + strength * (v * wy[r] * wx[c]);
        }
    return out;
}

void write_response_csv(const std::filesystem::path& path, const ResponseMap& response)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    out.precision(9);
    for (int r = 0; r < response.height; ++r) {
        for (int c = 0; c < response.width; ++c) {
            if (c > 0)
                out << ',';
            out << response.at(r, c);
        }
        out << '\n';
    }
}

} // namespace ftlr
