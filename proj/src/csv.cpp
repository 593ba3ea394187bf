#include "dirout/csv.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "dirout/errors.hpp"

namespace dirout {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream stream(line);
    while (std::getline(stream, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_double(const std::string& token, int line_no) {
    const char* begin = token.c_str();
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        throw GridMismatch("line " + std::to_string(line_no) + ": malformed number '" + token +
                           "'");
    return value;
}

long long parse_id(const std::string& token, int line_no) {
    const char* begin = token.c_str();
    char* end = nullptr;
    const long long value = std::strtoll(begin, &end, 10);
    if (end == begin || *end != '\0')
        throw GridMismatch("line " + std::to_string(line_no) + ": malformed id '" + token + "'");
    return value;
}

// Data lines of the file with their 1-based numbers; comments and blank
// lines dropped, trailing carriage returns stripped.
std::vector<std::pair<int, std::string>> data_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    std::vector<std::pair<int, std::string>> lines;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        lines.emplace_back(line_no, line);
    }
    return lines;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    return out;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvDataset read_curves_csv(const std::string& path) {
    const auto lines = data_lines(path);
    if (lines.empty()) throw GridMismatch("'" + path + "' holds no data");

    const auto header = split_fields(lines.front().second);
    if (header.size() < 3 || header[0] != "curve_id" || header[1] != "t")
        throw GridMismatch("line " + std::to_string(lines.front().first) +
                           ": expected header curve_id,t,x1,...");
    const int p = static_cast<int>(header.size()) - 2;

    std::vector<long long> ids;
    std::vector<double> raw_t;             // time column of the first curve
    std::vector<std::vector<double>> rows; // per-curve value stream, p per point
    int at = -1;                           // points seen for the current curve

    for (std::size_t li = 1; li < lines.size(); ++li) {
        const int line_no = lines[li].first;
        const auto fields = split_fields(lines[li].second);
        if (static_cast<int>(fields.size()) != p + 2)
            throw GridMismatch("line " + std::to_string(line_no) + ": expected " +
                               std::to_string(p + 2) + " fields, got " +
                               std::to_string(fields.size()));
        const long long id = parse_id(fields[0], line_no);
        const double t = parse_double(fields[1], line_no);

        if (ids.empty() || id != ids.back()) {
            if (!ids.empty() && at + 1 != static_cast<int>(raw_t.size()))
                throw GridMismatch("line " + std::to_string(line_no) + ": curve " +
                                   std::to_string(ids.back()) + " has " + std::to_string(at + 1) +
                                   " points, expected " + std::to_string(raw_t.size()));
            ids.push_back(id);
            rows.emplace_back();
            at = -1;
        }
        ++at;

        if (ids.size() == 1) {
            if (!raw_t.empty() && t <= raw_t.back())
                throw GridMismatch("line " + std::to_string(line_no) +
                                   ": time values must increase within a curve");
            raw_t.push_back(t);
        } else {
            if (at >= static_cast<int>(raw_t.size()))
                throw GridMismatch("line " + std::to_string(line_no) + ": curve " +
                                   std::to_string(id) + " has more points than the first curve");
            if (std::abs(t - raw_t[at]) > 1e-12)
                throw GridMismatch("line " + std::to_string(line_no) +
                                   ": time column differs from the first curve's");
        }
        for (int c = 0; c < p; ++c) rows.back().push_back(parse_double(fields[2 + c], line_no));
    }
    if (at + 1 != static_cast<int>(raw_t.size()))
        throw GridMismatch("curve " + std::to_string(ids.back()) + " has " +
                           std::to_string(at + 1) + " points, expected " +
                           std::to_string(raw_t.size()));

    const int n = static_cast<int>(ids.size());
    const int k = static_cast<int>(raw_t.size());
    if (k < 2) throw GridMismatch("need at least two time points per curve");

    CsvDataset result;
    result.curve_ids = ids;
    result.t_lo = raw_t.front();
    result.t_hi = raw_t.back();
    if (!(result.t_hi > result.t_lo)) throw GridMismatch("degenerate time range");

    result.data.n = n;
    result.data.p = p;
    result.data.grid.points.resize(k);
    const double span = result.t_hi - result.t_lo;
    for (int j = 0; j < k; ++j) result.data.grid.points[j] = (raw_t[j] - result.t_lo) / span;

    result.data.values.assign(static_cast<std::size_t>(n) * k * p, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < k; ++j)
            for (int c = 0; c < p; ++c)
                result.data.value(i, j, c) = rows[i][static_cast<std::size_t>(j) * p + c];

    validate_dataset(result.data);
    return result;
}

void write_curves_csv(const std::string& path, const FunctionalDataset& data,
                      const std::vector<long long>* ids, double t_lo, double t_hi) {
    validate_dataset(data);
    if (ids && static_cast<int>(ids->size()) != data.n)
        throw LengthMismatch("id list does not match the curve count");

    std::ofstream out = open_out(path);
    out << "# t_range " << format_double(t_lo) << ' ' << format_double(t_hi) << '\n';
    out << "curve_id,t";
    for (int c = 1; c <= data.p; ++c) out << ",x" << c;
    out << '\n';

    const double span = t_hi - t_lo;
    for (int i = 0; i < data.n; ++i) {
        const long long id = ids ? (*ids)[i] : i;
        for (int j = 0; j < data.k(); ++j) {
            const double t =
                (t_lo == 0.0 && t_hi == 1.0) ? data.grid[j] : t_lo + data.grid[j] * span;
            out << id << ',' << format_double(t);
            for (int c = 0; c < data.p; ++c) out << ',' << format_double(data.value(i, j, c));
            out << '\n';
        }
    }
    if (!out) throw Error("failed writing '" + path + "'");
}

void write_labels_csv(const std::string& path, const LabelSet& labels,
                      const std::vector<long long>* ids) {
    if (ids && ids->size() != labels.flags.size())
        throw LengthMismatch("id list does not match the label count");
    std::ofstream out = open_out(path);
    out << "curve_id,is_outlier\n";
    for (std::size_t i = 0; i < labels.flags.size(); ++i) {
        const long long id = ids ? (*ids)[i] : static_cast<long long>(i);
        out << id << ',' << (labels.flags[i] ? 1 : 0) << '\n';
    }
    if (!out) throw Error("failed writing '" + path + "'");
}

LabelSet read_labels_csv(const std::string& path) {
    const auto lines = data_lines(path);
    if (lines.empty()) throw GridMismatch("'" + path + "' holds no data");
    const auto header = split_fields(lines.front().second);
    if (header.size() != 2 || header[0] != "curve_id" || header[1] != "is_outlier")
        throw GridMismatch("line " + std::to_string(lines.front().first) +
                           ": expected header curve_id,is_outlier");
    LabelSet labels;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        const int line_no = lines[li].first;
        const auto fields = split_fields(lines[li].second);
        if (fields.size() != 2)
            throw GridMismatch("line " + std::to_string(line_no) + ": expected 2 fields");
        parse_id(fields[0], line_no);
        const long long flag = parse_id(fields[1], line_no);
        if (flag != 0 && flag != 1)
            throw GridMismatch("line " + std::to_string(line_no) + ": label must be 0 or 1");
        labels.flags.push_back(static_cast<std::uint8_t>(flag));
    }
    return labels;
}

void write_summaries_csv(const std::string& path,
                         const std::vector<OutlyingnessSummary>& summaries,
                         const std::vector<long long>* ids) {
    if (ids && ids->size() != summaries.size())
        throw LengthMismatch("id list does not match the summary count");
    const int p = summaries.empty() ? 0 : static_cast<int>(summaries.front().mo.size());
    std::ofstream out = open_out(path);
    out << "curve_id";
    for (int c = 1; c <= p; ++c) out << ",mo_" << c;
    out << ",vo,fo\n";
    for (std::size_t i = 0; i < summaries.size(); ++i) {
        const long long id = ids ? (*ids)[i] : static_cast<long long>(i);
        out << id;
        for (int c = 0; c < p; ++c) out << ',' << format_double(summaries[i].mo[c]);
        out << ',' << format_double(summaries[i].vo) << ',' << format_double(summaries[i].fo)
            << '\n';
    }
    if (!out) throw Error("failed writing '" + path + "'");
}

void write_detection_csv(const std::string& path, const DetectionReport& report,
                         const std::vector<long long>* ids) {
    if (ids && ids->size() != report.rmd2.size())
        throw LengthMismatch("id list does not match the report size");
    std::ofstream out = open_out(path);
    out << "curve_id,rmd2,scaled_rmd2,cutoff,is_outlier\n";
    for (std::size_t i = 0; i < report.rmd2.size(); ++i) {
        const long long id = ids ? (*ids)[i] : static_cast<long long>(i);
        out << id << ',' << format_double(report.rmd2[i]) << ','
            << format_double(report.scaled[i]) << ',' << format_double(report.cutoff) << ','
            << (report.flags[i] ? 1 : 0) << '\n';
    }
    if (!out) throw Error("failed writing '" + path + "'");
}

}  // namespace dirout
