#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "qpipe/errors.hpp"
#include "qpipe/rng.hpp"

namespace qpipe {

inline constexpr std::array<const char*, 4> kFeatureNames{"FRC", "FT", "LIC", "PI"};

using FeatureVec = std::array<double, 4>;

/// One sensor row. `component` is the hidden generating-component index of
/// synthetic data (diagnostics only, never serialized to CSV).
struct Sample {
    std::optional<std::int64_t> timestamp;  // seconds since epoch, UTC
    FeatureVec features{};
    std::optional<int> label;
    std::optional<int> component;

    bool operator==(const Sample& other) const {
        return timestamp == other.timestamp && features == other.features && label == other.label;
    }
};

struct Dataset {
    std::vector<Sample> samples;
    std::string provenance;

    std::size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }
};

namespace detail {

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// days-from-civil / civil-from-days (Howard Hinnant), so timestamps do not
// depend on the C library's timezone database.
inline std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

inline void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp + (mp < 10 ? 3 : -9);
    y += m <= 2;
}

}  // namespace detail

/// Epoch seconds -> "YYYY-MM-DDTHH:MM:SSZ".
inline std::string format_timestamp(std::int64_t seconds) {
    std::int64_t days = seconds / 86400;
    std::int64_t rem = seconds % 86400;
    if (rem < 0) {
        rem += 86400;
        --days;
    }
    std::int64_t year;
    unsigned month, day;
    detail::civil_from_days(days, year, month, day);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ",
                  static_cast<long long>(year), month, day,
                  static_cast<long long>(rem / 3600), static_cast<long long>(rem / 60 % 60),
                  static_cast<long long>(rem % 60));
    return buf;
}

/// "YYYY-MM-DDTHH:MM:SSZ" -> epoch seconds. Throws ParseError on malformed input.
inline std::int64_t parse_timestamp(const std::string& text, long line) {
    int year, month, day, hour, minute, second;
    char z = 0, tail = 0;
    const int matched = std::sscanf(text.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%c%c",
                                    &year, &month, &day, &hour, &minute, &second, &z, &tail);
    if (matched != 7 || z != 'Z' || month < 1 || month > 12 || day < 1 || day > 31 ||
        hour > 23 || minute > 59 || second > 60)
        throw ParseError("invalid timestamp '" + text + "' at line " + std::to_string(line), line);
    return detail::days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day)) * 86400 +
           hour * 3600 + minute * 60 + second;
}

namespace detail {

inline std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return out;
}

inline double parse_feature(const std::string& text, const char* name, long line) {
    if (text.empty())
        throw ParseError(std::string("empty ") + name + " at line " + std::to_string(line), line);
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size() || !std::isfinite(v))
        throw ParseError(std::string("non-numeric ") + name + " '" + text + "' at line " +
                             std::to_string(line),
                         line);
    return v;
}

}  // namespace detail

/// Reads a dataset from CSV. Schema: header `timestamp,FRC,FT,LIC,PI[,label]`;
/// timestamps ISO-8601 or empty; features finite decimal floats; label 0/1 or
/// empty. Lines starting with '#' are skipped. Malformed rows raise ParseError
/// naming the 1-based line.
inline Dataset load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("load_csv: cannot open '" + path + "'");

    Dataset ds;
    ds.provenance = "csv:" + path;
    std::string line;
    long line_no = 0;
    bool have_header = false;
    bool has_label = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!have_header) {
            if (line == "timestamp,FRC,FT,LIC,PI")
                has_label = false;
            else if (line == "timestamp,FRC,FT,LIC,PI,label")
                has_label = true;
            else {
                std::string missing;
                for (const char* name : {"timestamp", "FRC", "FT", "LIC", "PI"})
                    if (line.find(name) == std::string::npos) {
                        missing = name;
                        break;
                    }
                throw ParseError("bad CSV header at line " + std::to_string(line_no) +
                                     (missing.empty() ? "" : ": missing column '" + missing + "'"),
                                 line_no);
            }
            have_header = true;
            continue;
        }
        const auto fields = detail::split_fields(line);
        const std::size_t expected = has_label ? 6 : 5;
        if (fields.size() != expected)
            throw ParseError("expected " + std::to_string(expected) + " fields, got " +
                                 std::to_string(fields.size()) + " at line " + std::to_string(line_no),
                             line_no);
        Sample s;
        if (!fields[0].empty()) s.timestamp = parse_timestamp(fields[0], line_no);
        for (std::size_t j = 0; j < 4; ++j)
            s.features[j] = detail::parse_feature(fields[j + 1], kFeatureNames[j], line_no);
        if (has_label && !fields[5].empty()) {
            if (fields[5] != "0" && fields[5] != "1")
                throw ParseError("label must be 0 or 1 at line " + std::to_string(line_no), line_no);
            s.label = fields[5][0] - '0';
        }
        ds.samples.push_back(s);
    }
    if (!have_header) throw ParseError("empty CSV '" + path + "'", line_no);
    return ds;
}

/// Writes a dataset at full decimal precision. `comments` are emitted first,
/// one '#' line each; the label column appears iff any sample carries a label.
inline void write_csv(const Dataset& ds, const std::string& path,
                      std::span<const std::string> comments = {}) {
    std::ofstream out(path);
    if (!out) throw DataError("write_csv: cannot open '" + path + "' for writing");
    for (const auto& c : comments) out << "# " << c << "\n";
    bool has_label = false;
    for (const auto& s : ds.samples)
        if (s.label) has_label = true;
    out << "timestamp,FRC,FT,LIC,PI" << (has_label ? ",label" : "") << "\n";
    for (const auto& s : ds.samples) {
        if (s.timestamp) out << format_timestamp(*s.timestamp);
        for (double v : s.features) out << ',' << detail::format_double(v);
        if (has_label) {
            out << ',';
            if (s.label) out << *s.label;
        }
        out << "\n";
    }
    if (!out) throw DataError("write_csv: failed writing '" + path + "'");
}

/// pi * x / ||x||_2; the phase-encoding range normalization.
inline FeatureVec normalize_for_phase_encoding(const FeatureVec& x) {
    double norm = 0.0;
    for (double v : x) {
        if (!std::isfinite(v)) throw std::invalid_argument("normalize_for_phase_encoding: non-finite component");
        norm += v * v;
    }
    norm = std::sqrt(norm);
    if (norm <= 1e-9)
        throw DegenerateInputError("normalize_for_phase_encoding: vector norm below 1e-9");
    FeatureVec out;
    const double scale = 3.141592653589793238462643 / norm;
    for (std::size_t j = 0; j < 4; ++j) out[j] = x[j] * scale;
    return out;
}

struct SplitResult {
    Dataset train, val, test;
};

/// Seeded shuffle followed by a contiguous split into the given counts.
/// Requires n_train + n_val + n_test == dataset size.
inline SplitResult split_counts(const Dataset& ds, std::size_t n_train, std::size_t n_val,
                                std::size_t n_test, std::uint64_t seed) {
    if (n_train + n_val + n_test != ds.size())
        throw std::invalid_argument("split_counts: counts must sum to the dataset size");
    std::vector<std::size_t> order(ds.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng rng(seed);
    rng.shuffle(order);
    SplitResult out;
    out.train.provenance = ds.provenance + "/train";
    out.val.provenance = ds.provenance + "/val";
    out.test.provenance = ds.provenance + "/test";
    std::size_t pos = 0;
    for (std::size_t i = 0; i < n_train; ++i) out.train.samples.push_back(ds.samples[order[pos++]]);
    for (std::size_t i = 0; i < n_val; ++i) out.val.samples.push_back(ds.samples[order[pos++]]);
    for (std::size_t i = 0; i < n_test; ++i) out.test.samples.push_back(ds.samples[order[pos++]]);
    return out;
}

/// Fractional split; counts are cumulative floors so the three parts always
/// partition the dataset.
inline SplitResult split(const Dataset& ds, const std::array<double, 3>& fractions,
                         std::uint64_t seed) {
    double sum = 0.0;
    for (double f : fractions) {
        if (!(f >= 0.0 && f <= 1.0)) throw std::invalid_argument("split: fractions must be in [0, 1]");
        sum += f;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("split: fractions must sum to 1");
    const double n = static_cast<double>(ds.size());
    const std::size_t c1 = static_cast<std::size_t>(std::floor(fractions[0] * n));
    const std::size_t c12 = static_cast<std::size_t>(std::floor((fractions[0] + fractions[1]) * n));
    return split_counts(ds, c1, c12 - c1, ds.size() - c12, seed);
}

inline std::vector<FeatureVec> features_of(const Dataset& ds) {
    std::vector<FeatureVec> out;
    out.reserve(ds.size());
    for (const auto& s : ds.samples) out.push_back(s.features);
    return out;
}

inline std::vector<int> labels_of(const Dataset& ds) {
    std::vector<int> out;
    out.reserve(ds.size());
    for (const auto& s : ds.samples) {
        if (!s.label) throw DataError("labels_of: sample without label (run clustering first)");
        out.push_back(*s.label);
    }
    return out;
}

}  // namespace qpipe
