#pragma once

#include "ftlr/features.hpp"

#include <filesystem>
#include <vector>

namespace ftlr {

/// Valid-mode correlation surface. Cell (center_row, center_col) corresponds to
/// zero displacement between template and search centers; the center is
/// half-integer when the size difference is odd.
struct ResponseMap {
    int height = 0;
    int width = 0;
    std::vector<double> values;
    double center_row = 0.0;
    double center_col = 0.0;

    [[nodiscard]] double at(int row, int col) const { return values[static_cast<std::size_t>(row) * width + col]; }
    double& at(int row, int col) { return values[static_cast<std::size_t>(row) * width + col]; }

    bool operator==(const ResponseMap&) const = default;
};

enum class CorrelationMethod { Auto, Direct, Fft };

/// Valid-mode zero-mean normalized cross-correlation, computed per channel and
/// averaged over channels. Every value lies in [-1, 1]. Windows or templates
/// with (numerically) zero variance contribute 0.
ResponseMap cross_correlate(const FeatureMap& templ, const FeatureMap& search,
                            CorrelationMethod method = CorrelationMethod::Auto);

/// Spatial-loop kernel, output rows distributed over OpenMP threads.
ResponseMap cross_correlate_direct(const FeatureMap& templ, const FeatureMap& search);

/// FFTW kernel. Transform size is the search size rounded up to a 2^a 3^b 5^c
/// length, which is enough for valid-mode output to be free of wraparound.
ResponseMap cross_correlate_fft(const FeatureMap& templ, const FeatureMap& search);

/// Smallest n' >= n whose only prime factors are 2, 3 and 5.
int fft_friendly_size(int n);

/// Symmetric Hann window of length n (all ones for n == 1).
std::vector<double> hann_window(int n);

/// (1 - strength) * response + strength * (response .* hann2d).
ResponseMap apply_motion_window(const ResponseMap& response, double strength);

/// Writes the grid as CSV, one response row per line.
void write_response_csv(const std::filesystem::path& path, const ResponseMap& response);

namespace detail {
void validate_correlation_inputs(const FeatureMap& templ, const FeatureMap& search);
ResponseMap empty_response(const FeatureMap& templ, const FeatureMap& search);
}

} // namespace ftlr
