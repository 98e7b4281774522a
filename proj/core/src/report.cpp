#include "odrc/report.hpp"

#include "odrc/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace odrc {

namespace {

std::string fmt(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& s)
{
    if (s == "nan")
        return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf")
        return std::numeric_limits<double>::infinity();
    if (s == "-inf")
        return -std::numeric_limits<double>::infinity();
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw IoError("malformed number in report: '" + s + "'");
    return v;
}

std::string checked_label(const std::string& s)
{
    if (s.find_first_of(",\n\"") != std::string::npos)
        throw ArgumentError("report labels must not contain commas, quotes or newlines: " + s);
    return s;
}

std::string segment_name(std::uint64_t seed, const char* segment)
{
    return "s" + std::to_string(seed) + "/" + segment;
}

void add_spectrum(Report& report, const std::string& segment, const LyapunovSpectrum& spectrum)
{
    auto at = [&](std::size_t i) {
        return i < spectrum.exponents.size() ? spectrum.exponents[i] : std::numeric_limits<double>::quiet_NaN();
    };
    report.spectrum.push_back(SpectrumRow{segment, at(0), at(1), at(2)});
}

void add_map(Report& report, const std::string& segment, const ReturnMap& map)
{
    for (const auto& [a, b] : map.pairs)
        report.returnmap.push_back(ReturnMapRow{segment, a, b});
}

void add_timing(Report& report, const TimingResult& result)
{
    for (const auto& cell : result.cells)
        report.curve.push_back(CurveRow{cell.interval_s, cell.seed, cell.r2, result.condition});
    report.capacity.push_back(CapacityRow{result.condition, result.capacity, result.capacity_sd});
}

void add_trace(Report& report, const TrialRecord& record)
{
    for (Eigen::Index t = 0; t < record.output.rows(); ++t)
        for (Eigen::Index d = 0; d < record.output.cols(); ++d)
            report.trace.push_back(
                TraceRow{static_cast<double>(t), static_cast<int>(d), record.output(t, d), record.target(t, d)});
}

} // namespace

Report make_report(const TimingResult& result)
{
    Report report;
    report.experiment = "timing";
    add_timing(report, result);
    if (result.example)
        add_trace(report, *result.example);
    return report;
}

Report make_report(const NoiseSweepResult& result)
{
    Report report;
    report.experiment = "noise-sweep";
    for (const auto& run : result.runs)
        add_timing(report, run);
    return report;
}

Report make_report(const SweepResult& result)
{
    Report report;
    report.experiment = "param-sweep";
    for (const auto& row : result.rows) {
        TimingResult labelled = row.run;
        labelled.condition = std::string(to_string(result.axis)) + "=" + fmt(row.value);
        add_timing(report, labelled);
    }
    return report;
}

Report make_report(const ChaosResult& result)
{
    Report report;
    report.experiment = "chaos";
    add_map(report, "target", result.target_map);
    if (result.target_spectrum)
        add_spectrum(report, "target/sano-sawada", *result.target_spectrum);
    if (result.reference_spectrum)
        add_spectrum(report, "target/benettin", *result.reference_spectrum);
    for (const auto& seed : result.seeds) {
        report.curve.push_back(CurveRow{result.task_s, seed.seed, seed.task_r2.mean, result.condition});
        add_map(report, segment_name(seed.seed, "reproduction"), seed.reproduction_map);
        add_map(report, segment_name(seed.seed, "generalization"), seed.generalization_map);
        if (seed.reproduction_spectrum)
            add_spectrum(report, segment_name(seed.seed, "reproduction"), *seed.reproduction_spectrum);
        if (seed.generalization_spectrum)
            add_spectrum(report, segment_name(seed.seed, "generalization"), *seed.generalization_spectrum);
    }
    if (!result.seeds.empty())
        add_trace(report, result.seeds.front().test);
    return report;
}

namespace {

std::ofstream open_for_write(const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write " + path.string());
    return out;
}

struct Series {
    std::string label;
    std::vector<double> x, y;
    bool scatter = false;
};

// Minimal line/scatter chart.
void write_svg(const std::filesystem::path& path, const std::string& title, const std::string& x_label,
               const std::string& y_label, const std::vector<Series>& series)
{
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : series) {
        for (double v : s.x)
            if (std::isfinite(v)) {
                x0 = std::min(x0, v);
                x1 = std::max(x1, v);
            }
        for (double v : s.y)
            if (std::isfinite(v)) {
                y0 = std::min(y0, v);
                y1 = std::max(y1, v);
            }
    }
    if (!std::isfinite(x0) || !std::isfinite(y0))
        return;
    if (x1 == x0)
        x1 = x0 + 1.0;
    if (y1 == y0)
        y1 = y0 + 1.0;

    constexpr double width = 640, height = 420, left = 60, right = 20, top = 40, bottom = 50;
    auto px = [&](double v) { return left + (v - x0) / (x1 - x0) * (width - left - right); };
    auto py = [&](double v) { return height - bottom - (v - y0) / (y1 - y0) * (height - top - bottom); };
    static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#7f7f7f"};

    auto out = open_for_write(path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n"
        << "<line x1=\"" << left << "\" y1=\"" << height - bottom << "\" x2=\"" << width - right << "\" y2=\""
        << height - bottom << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << height - bottom
        << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << width / 2 << "\" y=\"" << height - 12 << "\" text-anchor=\"middle\" font-size=\"12\">"
        << x_label << " [" << fmt(x0) << ", " << fmt(x1) << "]</text>\n"
        << "<text x=\"14\" y=\"" << height / 2 << "\" font-size=\"12\" transform=\"rotate(-90 14 " << height / 2
        << ")\" text-anchor=\"middle\">" << y_label << " [" << fmt(y0) << ", " << fmt(y1) << "]</text>\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* colour = palette[k % std::size(palette)];
        if (s.scatter) {
            for (std::size_t i = 0; i < s.x.size(); ++i)
                out << "<circle cx=\"" << px(s.x[i]) << "\" cy=\"" << py(s.y[i]) << "\" r=\"1.5\" fill=\"" << colour
                    << "\"/>\n";
        } else {
            out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1\" points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i)
                out << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
            out << "\"/>\n";
        }
        out << "<text x=\"" << width - right - 4 << "\" y=\"" << top + 14 * (k + 1)
            << "\" text-anchor=\"end\" font-size=\"11\" fill=\"" << colour << "\">" << s.label << "</text>\n";
    }
    out << "</svg>\n";
}

void write_plots(const Report& report, const std::filesystem::path& dir)
{
    if (!report.curve.empty()) {
        std::map<std::string, std::map<double, std::pair<double, int>>> grouped;
        for (const auto& row : report.curve) {
            auto& cell = grouped[row.condition][row.task_s];
            cell.first += row.r2;
            cell.second += 1;
        }
        std::vector<Series> series;
        for (const auto& [condition, points] : grouped) {
            Series s{condition, {}, {}, points.size() == 1};
            for (const auto& [x, acc] : points) {
                s.x.push_back(x);
                s.y.push_back(acc.first / acc.second);
            }
            series.push_back(std::move(s));
        }
        write_svg(dir / "curve.svg", "mean R^2", "task length (s)", "R^2", series);
    }
    if (!report.returnmap.empty()) {
        std::map<std::string, Series> by_segment;
        for (const auto& row : report.returnmap) {
            auto& s = by_segment[row.segment];
            s.label = row.segment;
            s.scatter = true;
            s.x.push_back(row.m_i);
            s.y.push_back(row.m_next);
        }
        std::vector<Series> series;
        for (auto& [name, s] : by_segment)
            series.push_back(std::move(s));
        write_svg(dir / "returnmap.svg", "return map of successive maxima", "M_i", "M_i+1", series);
    }
    if (!report.trace.empty()) {
        Series output{"output", {}, {}, false}, target{"target", {}, {}, false};
        for (const auto& row : report.trace) {
            if (row.dim != 0)
                continue;
            output.x.push_back(row.t_ms);
            output.y.push_back(row.output);
            target.x.push_back(row.t_ms);
            target.y.push_back(row.target);
        }
        write_svg(dir / "trace.svg", "output vs target (dim 0)", "t (ms)", "value", {target, output});
    }
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path, std::string_view header)
{
    std::vector<std::vector<std::string>> rows;
    std::ifstream in(path);
    if (!in)
        return rows;
    std::string line;
    if (!std::getline(in, line) || line != header)
        throw IoError("unexpected header in " + path.string());
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            cells.push_back(cell);
        rows.push_back(std::move(cells));
    }
    return rows;
}

void expect_columns(const std::vector<std::string>& row, std::size_t n, const char* file)
{
    if (row.size() != n)
        throw IoError(std::string("wrong column count in ") + file);
}

} // namespace

void emit_report(const Report& report, const std::filesystem::path& dir, bool plots)
{
    if (report.empty())
        throw ArgumentError("emit_report: nothing to write");
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir))
        throw IoError("cannot create output directory " + dir.string());

    if (!report.config_json.empty()) {
        auto out = open_for_write(dir / "config.json");
        out << report.config_json;
    }
    if (!report.curve.empty()) {
        auto out = open_for_write(dir / "curve.csv");
        out << "task_s,seed,r2,condition\n";
        for (const auto& r : report.curve)
            out << fmt(r.task_s) << ',' << r.seed << ',' << fmt(r.r2) << ',' << checked_label(r.condition) << '\n';
    }
    if (!report.capacity.empty()) {
        auto out = open_for_write(dir / "capacity.csv");
        out << "condition,capacity_s,sd\n";
        for (const auto& r : report.capacity)
            out << checked_label(r.condition) << ',' << fmt(r.capacity_s) << ',' << fmt(r.sd) << '\n';
    }
    if (!report.returnmap.empty()) {
        auto out = open_for_write(dir / "returnmap.csv");
        out << "segment,m_i,m_next\n";
        for (const auto& r : report.returnmap)
            out << checked_label(r.segment) << ',' << fmt(r.m_i) << ',' << fmt(r.m_next) << '\n';
    }
    if (!report.spectrum.empty()) {
        auto out = open_for_write(dir / "spectrum.csv");
        out << "segment,lambda1,lambda2,lambda3\n";
        for (const auto& r : report.spectrum)
            out << checked_label(r.segment) << ',' << fmt(r.lambda1) << ',' << fmt(r.lambda2) << ','
                << fmt(r.lambda3) << '\n';
    }
    if (!report.trace.empty()) {
        auto out = open_for_write(dir / "trace.csv");
        out << "t_ms,dim,output,target\n";
        for (const auto& r : report.trace)
            out << fmt(r.t_ms) << ',' << r.dim << ',' << fmt(r.output) << ',' << fmt(r.target) << '\n';
    }
    if (plots)
        write_plots(report, dir);
}

Report load_report(const std::filesystem::path& dir)
{
    Report report;
    for (const auto& row : read_csv(dir / "curve.csv", "task_s,seed,r2,condition")) {
        expect_columns(row, 4, "curve.csv");
        report.curve.push_back(
            CurveRow{parse_double(row[0]), std::stoull(row[1]), parse_double(row[2]), row[3]});
    }
    for (const auto& row : read_csv(dir / "capacity.csv", "condition,capacity_s,sd")) {
        expect_columns(row, 3, "capacity.csv");
        report.capacity.push_back(CapacityRow{row[0], parse_double(row[1]), parse_double(row[2])});
    }
    for (const auto& row : read_csv(dir / "returnmap.csv", "segment,m_i,m_next")) {
        expect_columns(row, 3, "returnmap.csv");
        report.returnmap.push_back(ReturnMapRow{row[0], parse_double(row[1]), parse_double(row[2])});
    }
    for (const auto& row : read_csv(dir / "spectrum.csv", "segment,lambda1,lambda2,lambda3")) {
        expect_columns(row, 4, "spectrum.csv");
        report.spectrum.push_back(
            SpectrumRow{row[0], parse_double(row[1]), parse_double(row[2]), parse_double(row[3])});
    }
    for (const auto& row : read_csv(dir / "trace.csv", "t_ms,dim,output,target")) {
        expect_columns(row, 4, "trace.csv");
        report.trace.push_back(
            TraceRow{parse_double(row[0]), std::stoi(row[1]), parse_double(row[2]), parse_double(row[3])});
    }
    if (std::ifstream cfg(dir / "config.json"); cfg) {
        std::stringstream buffer;
        buffer << cfg.rdbuf();
        report.config_json = buffer.str();
    }
    return report;
}

} // namespace odrc
