#include "ftlr/plot.hpp"

#include "ftlr/config.hpp"

#include <cstdio>
#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace ftlr {

std::vector<CurveRow> curve_rows(std::span<const EvalRecord> records)
{
    std::vector<CurveRow> rows;
    for (const EvalRecord& r : records) {
        const std::string protocol(to_string(r.result.protocol));
        for (std::size_t i = 0; i < r.result.success_curve.size(); ++i)
            rows.push_back({r.sequence, r.variant, protocol, "success", 0.05 * static_cast<double>(i),
                            r.result.success_curve[i]});
        for (std::size_t d = 0; d < r.result.precision_curve.size(); ++d)
            rows.push_back(
                {r.sequence, r.variant, protocol, "precision", static_cast<double>(d), r.result.precision_curve[d]});
    }
    return rows;
}

std::vector<CurveRow> read_curves_csv(std::istream& in)
{
    std::vector<CurveRow> rows;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || (line_no == 1 && line.rfind("sequence,", 0) == 0))
            continue;
        std::vector<std::string> f;
        std::istringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');)
            f.push_back(cell);
        if (f.size() != 6)
            throw IngestError("curves.csv:" + std::to_string(line_no) + ": expected 6 columns");
        try {
            rows.push_back({f[0], f[1], f[2], f[3], parse_double("threshold", f[4]), parse_double("value", f[5])});
        } catch (const std::invalid_argument& e) {
            throw IngestError("curves.csv:" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return rows;
}

namespace {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

std::vector<Series> mean_series(std::span<const CurveRow> rows, const std::string& kind)
{
    // label -> threshold -> (sum, count)
    std::map<std::string, std::map<double, std::pair<double, int>>> acc;
    for (const CurveRow& r : rows) {
        if (r.kind != kind)
            continue;
        auto& cell = acc[r.variant + " (" + r.protocol + ")"][r.threshold];
        cell.first += r.value;
        cell.second += 1;
    }
    std::vector<Series> out;
    for (const auto& [label, points] : acc) {
        Series s{label, {}, {}};
        for (const auto& [t, sc] : points) {
            s.x.push_back(t);
            s.y.push_back(sc.first / sc.second);
        }
        out.push_back(std::move(s));
    }
    return out;
}

double area_under(const Series& s)
{
    double sum = 0.0;
    for (double v : s.y)
        sum += v;
    return s.y.empty() ? 0.0 : sum / static_cast<double>(s.y.size());
}

void write_svg(const std::filesystem::path& path, const std::vector<Series>& series, const std::string& title,
               const std::string& x_label, double x_max, bool success)
{
    constexpr double W = 480, H = 360, L = 56, R = 16, T = 32, B = 48;
    const double pw = W - L - R, ph = H - T - B;
    auto sx = [&](double x) { return L + pw * x / x_max; };
    auto sy = [&](double y) { return T + ph * (1.0 - y); };
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};

    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
        << title << "</text>\n"
        << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double fy = i / 5.0, fx = x_max * i / 5.0;
        out << "<text x=\"" << L - 6 << "\" y=\"" << sy(fy) + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" << format_double(fy) << "</text>\n"
            << "<text x=\"" << sx(fx) << "\" y=\"" << T + ph + 14
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" << format_double(fx)
            << "</text>\n";
    }
    out << "<text x=\"" << L + pw / 2 << "\" y=\"" << H - 10
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << x_label << "</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const Series& s = series[k];
        const char* color = colors[k % std::size(colors)];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i)
            out << sx(s.x[i]) << ',' << sy(s.y[i]) << ' ';
        out << "\"/>\n";
        const double score = success ? area_under(s) : [&] {
            auto it = std::find(s.x.begin(), s.x.end(), 20.0);
            return it == s.x.end() ? 0.0 : s.y[static_cast<std::size_t>(it - s.x.begin())];
        }();
        char buf[32];
        std::snprintf(buf, sizeof buf, " [%.3f]", score);
        const double ly = T + 14 + 14 * static_cast<double>(k);
        const double lx = L + pw - 180;
        out << "<line x1=\"" << lx << "\" y1=\"" << ly - 4 << "\" x2=\"" << lx + 16 << "\" y2=\"" << ly - 4
            << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"" << lx + 20 << "\" y=\"" << ly
            << "\" font-family=\"sans-serif\" font-size=\"10\">" << s.label << buf << "</text>\n";
    }
    out << "</svg>\n";
}

} // namespace

void write_curve_svgs(const std::filesystem::path& directory, std::span<const CurveRow> rows)
{
    std::filesystem::create_directories(directory);
    write_svg(directory / "success_plot.svg", mean_series(rows, "success"), "Success plot", "Overlap threshold", 1.0,
              true);
    write_svg(directory / "precision_plot.svg", mean_series(rows, "precision"), "Precision plot",
              "Location error threshold (px)", 50.0, false);
}

} // namespace ftlr
