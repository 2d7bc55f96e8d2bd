#include "wtail/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "wtail/errors.hpp"

namespace wtail {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(field);
            field.clear();
        } else if (ch != '\r') {
            field += ch;
        }
    }
    fields.push_back(field);
    return fields;
}

std::string trimmed(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& s, const std::string& origin,
                    std::size_t line_no, const char* column) {
    const std::string t = trimmed(s);
    if (t.empty()) {
        throw parse_error(origin + ":" + std::to_string(line_no) + ": empty " +
                          column + " field");
    }
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &pos);
    } catch (const std::exception&) {
        throw parse_error(origin + ":" + std::to_string(line_no) + ": '" + t +
                          "' is not a number in column " + column);
    }
    if (pos != t.size()) {
        throw parse_error(origin + ":" + std::to_string(line_no) + ": '" + t +
                          "' has trailing junk in column " + column);
    }
    return v;
}

}  // namespace

DatasetSummary summarize(const CensoredSample& sample) {
    DatasetSummary s;
    s.n = sample.size();
    s.n_uncensored = sample.n_uncensored();
    std::vector<double> xs(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) xs[i] = sample[i].x;
    std::sort(xs.begin(), xs.end());
    const std::size_t n = xs.size();
    s.covariate_median = n % 2 == 1 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
    if (n >= 2) {
        double mean = 0.0;
        for (double v : xs) mean += v;
        mean /= static_cast<double>(n);
        double ss = 0.0;
        for (double v : xs) ss += (v - mean) * (v - mean);
        s.covariate_sd = std::sqrt(ss / static_cast<double>(n - 1));
    }
    return s;
}

LoadedDataset load_csv(std::istream& in, const std::string& origin) {
    std::string line;
    if (!std::getline(in, line)) {
        throw parse_error(origin + ": empty file");
    }
    const std::vector<std::string> header = split_csv_line(line);
    int time_col = -1, delta_col = -1, cov_col = -1;
    for (std::size_t c = 0; c < header.size(); ++c) {
        const std::string name = trimmed(header[c]);
        if (name == "time") time_col = static_cast<int>(c);
        else if (name == "delta") delta_col = static_cast<int>(c);
        else if (name == "covariate") cov_col = static_cast<int>(c);
        // unknown columns (id, anything else) are ignored
    }
    if (time_col < 0 || delta_col < 0 || cov_col < 0) {
        throw parse_error(origin +
                          ":1: header must name columns time, delta and covariate");
    }

    std::vector<Observation> obs;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trimmed(line).empty()) continue;
        const std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            throw parse_error(origin + ":" + std::to_string(line_no) + ": expected " +
                              std::to_string(header.size()) + " fields, found " +
                              std::to_string(fields.size()));
        }
        Observation o;
        o.z = parse_double(fields[static_cast<std::size_t>(time_col)], origin,
                           line_no, "time");
        const double d = parse_double(fields[static_cast<std::size_t>(delta_col)],
                                      origin, line_no, "delta");
        o.x = parse_double(fields[static_cast<std::size_t>(cov_col)], origin,
                           line_no, "covariate");
        if (d != 0.0 && d != 1.0) {
            throw parse_error(origin + ":" + std::to_string(line_no) +
                              ": delta must be 0 or 1");
        }
        o.uncensored = d == 1.0;
        if (!(o.z > 0.0) || !std::isfinite(o.z)) {
            throw parse_error(origin + ":" + std::to_string(line_no) +
                              ": time must be a positive real");
        }
        if (!std::isfinite(o.x)) {
            throw parse_error(origin + ":" + std::to_string(line_no) +
                              ": covariate must be finite");
        }
        obs.push_back(o);
    }
    if (obs.empty()) {
        throw parse_error(origin + ": no data rows");
    }
    CensoredSample sample(std::move(obs));
    DatasetSummary summary = summarize(sample);
    return LoadedDataset{std::move(sample), summary};
}

LoadedDataset load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw parse_error(path + ": cannot open file");
    }
    return load_csv(in, path);
}

void save_csv(const CensoredSample& sample, std::ostream& out) {
    out << "id,time,delta,covariate\n";
    char buf[40];
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const Observation& o = sample[i];
        out << (i + 1) << ',';
        std::snprintf(buf, sizeof(buf), "%.17g", o.z);
        out << buf << ',' << (o.uncensored ? 1 : 0) << ',';
        std::snprintf(buf, sizeof(buf), "%.17g", o.x);
        out << buf << '\n';
    }
}

std::vector<QQPoint> qq_points(const CensoredSample& sample, std::size_t k_n) {
    const std::size_t n = sample.size();
    if (k_n < 1 || k_n >= n) {
        throw invalid_k("qq_points requires 1 <= k < n (k = " + std::to_string(k_n) +
                        ", n = " + std::to_string(n) + ")");
    }
    std::vector<double> z(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = sample[i].z;
    std::sort(z.begin(), z.end());
    std::vector<QQPoint> pts(k_n);
    for (std::size_t i = 1; i <= k_n; ++i) {
        pts[i - 1].loglog_n_over_i =
            std::log(std::log(static_cast<double>(n) / static_cast<double>(i)));
        pts[i - 1].log_z = std::log(z[n - i]);
    }
    return pts;
}

void write_qq_csv(const std::vector<QQPoint>& points, std::ostream& out) {
    char buf[40];
    out << "loglog_n_over_i,log_z\n";
    for (const QQPoint& p : points) {
        std::snprintf(buf, sizeof(buf), "%.17g", p.loglog_n_over_i);
        out << buf << ',';
        std::snprintf(buf, sizeof(buf), "%.17g", p.log_z);
        out << buf << '\n';
    }
}

}  // namespace wtail
