#include "kjl/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace kjl {

int Dataset::num_classes() const {
    if (!has_labels || labels.empty()) return 0;
    return *std::max_element(labels.begin(), labels.end()) + 1;
}

namespace {

Dataset generate_cluster_in_cluster(const SynthSpec& spec, SeededRng& rng) {
    if (!(spec.r2 > spec.r1) || !(spec.r3 > spec.r2))
        throw InvalidSpec("cluster_in_cluster: need r1 < r2 < r3");
    const int n = spec.n_points;
    const int inner = n / 2;

    Dataset d;
    d.name = "cluster_in_cluster";
    d.features = Matrix(static_cast<std::size_t>(n), 2);
    d.labels.resize(static_cast<std::size_t>(n));
    d.has_labels = true;

    const double sigma_inner = spec.r1 / 2.0;
    for (int i = 0; i < inner; ++i) {
        d.features(static_cast<std::size_t>(i), 0) = sigma_inner * rng.next_gaussian();
        d.features(static_cast<std::size_t>(i), 1) = sigma_inner * rng.next_gaussian();
        d.labels[static_cast<std::size_t>(i)] = 0;
    }
    for (int i = inner; i < n; ++i) {
        const double angle = 2.0 * std::numbers::pi * rng.next_uniform();
        const double radius =
            spec.r2 + (spec.r3 - spec.r2) * rng.next_uniform() + spec.noise * rng.next_gaussian();
        d.features(static_cast<std::size_t>(i), 0) = radius * std::cos(angle);
        d.features(static_cast<std::size_t>(i), 1) = radius * std::sin(angle);
        d.labels[static_cast<std::size_t>(i)] = 1;
    }
    return d;
}

Dataset generate_crescent_full_moon(const SynthSpec& spec, SeededRng& rng) {
    if (!(spec.crescent_radius - spec.crescent_width / 2.0 > spec.disc_radius))
        throw InvalidSpec("crescent_full_moon: crescent band must clear the disc");
    if (!(spec.crescent_span_deg > 0.0 && spec.crescent_span_deg <= 360.0))
        throw InvalidSpec("crescent_full_moon: span must be in (0, 360] degrees");
    const int n = spec.n_points;
    const int disc = n / 2;

    Dataset d;
    d.name = "crescent_full_moon";
    d.features = Matrix(static_cast<std::size_t>(n), 2);
    d.labels.resize(static_cast<std::size_t>(n));
    d.has_labels = true;

    for (int i = 0; i < disc; ++i) {
        const double angle = 2.0 * std::numbers::pi * rng.next_uniform();
        const double radius = spec.disc_radius * std::sqrt(rng.next_uniform());
        d.features(static_cast<std::size_t>(i), 0) = radius * std::cos(angle);
        d.features(static_cast<std::size_t>(i), 1) = radius * std::sin(angle);
        d.labels[static_cast<std::size_t>(i)] = 0;
    }
    const double span = spec.crescent_span_deg * std::numbers::pi / 180.0;
    const double start = std::numbers::pi / 2.0 - span / 2.0;  // arc centered at the top
    for (int i = disc; i < n; ++i) {
        const double angle = start + span * rng.next_uniform();
        const double radius = spec.crescent_radius +
                              spec.crescent_width * (rng.next_uniform() - 0.5) +
                              spec.noise * rng.next_gaussian();
        d.features(static_cast<std::size_t>(i), 0) = radius * std::cos(angle);
        d.features(static_cast<std::size_t>(i), 1) = radius * std::sin(angle);
        d.labels[static_cast<std::size_t>(i)] = 1;
    }
    return d;
}

Dataset generate_gaussian_mixture(const SynthSpec& spec, SeededRng& rng) {
    if (spec.means.empty()) throw InvalidSpec("gaussian_mixture: no component means");
    if (spec.weights.size() != spec.means.size())
        throw InvalidSpec("gaussian_mixture: weights and means must pair up");
    const double wsum = std::accumulate(spec.weights.begin(), spec.weights.end(), 0.0);
    if (std::abs(wsum - 1.0) > 1e-9) throw InvalidSpec("gaussian_mixture: weights must sum to 1");
    if (!(spec.sigma > 0.0)) throw InvalidSpec("gaussian_mixture: sigma must be positive");
    const std::size_t dim = spec.means.front().size();
    for (const auto& m : spec.means)
        if (m.size() != dim) throw InvalidSpec("gaussian_mixture: mean dimensions differ");

    // largest-remainder allocation keeps counts within 1 of the exact shares
    const int n = spec.n_points;
    const std::size_t k = spec.means.size();
    std::vector<int> counts(k);
    std::vector<std::pair<double, std::size_t>> remainders;
    int assigned = 0;
    for (std::size_t c = 0; c < k; ++c) {
        const double share = spec.weights[c] * n;
        counts[c] = static_cast<int>(std::floor(share));
        assigned += counts[c];
        remainders.emplace_back(share - std::floor(share), c);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (int r = 0; r < n - assigned; ++r) ++counts[remainders[static_cast<std::size_t>(r)].second];

    Dataset d;
    d.name = "gaussian_mixture";
    d.features = Matrix(static_cast<std::size_t>(n), dim);
    d.labels.resize(static_cast<std::size_t>(n));
    d.has_labels = true;
    std::size_t row = 0;
    for (std::size_t c = 0; c < k; ++c) {
        for (int i = 0; i < counts[c]; ++i, ++row) {
            for (std::size_t j = 0; j < dim; ++j)
                d.features(row, j) = spec.means[c][j] + spec.sigma * rng.next_gaussian();
            d.labels[row] = static_cast<int>(c);
        }
    }
    return d;
}

}  // namespace

Dataset generate(const SynthSpec& spec) {
    if (spec.n_points < 2) throw InvalidSpec("generate: need at least 2 points");
    SeededRng rng(spec.seed);
    switch (spec.shape) {
        case SynthShape::cluster_in_cluster: return generate_cluster_in_cluster(spec, rng);
        case SynthShape::crescent_full_moon: return generate_crescent_full_moon(spec, rng);
        case SynthShape::gaussian_mixture: return generate_gaussian_mixture(spec, rng);
    }
    throw InvalidSpec("generate: unknown shape");
}

namespace {

std::vector<std::string> split_line(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, delim)) out.push_back(field);
    if (!line.empty() && line.back() == delim) out.emplace_back();
    return out;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

Dataset load_csv(const std::string& path, std::optional<LabelColumn> label_col, bool has_header) {
    std::ifstream in(path);
    if (!in) throw IoError("load_csv: cannot open " + path);

    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }

    std::size_t first = 0;
    while (first < lines.size() && trim(lines[first]).empty()) ++first;
    if (first == lines.size()) throw EmptyData("load_csv: file has no rows");

    const std::string& probe = lines[first];
    const char delim =
        std::count(probe.begin(), probe.end(), ';') > std::count(probe.begin(), probe.end(), ',')
            ? ';'
            : ',';

    std::vector<std::string> header;
    std::size_t data_start = first;
    if (has_header) {
        header = split_line(lines[first], delim);
        data_start = first + 1;
    }

    std::optional<std::size_t> label_idx;
    if (label_col) {
        if (std::holds_alternative<std::size_t>(*label_col)) {
            label_idx = std::get<std::size_t>(*label_col);
        } else {
            const std::string& name = std::get<std::string>(*label_col);
            if (!has_header) throw InvalidSpec("load_csv: label column by name needs a header");
            for (std::size_t i = 0; i < header.size(); ++i)
                if (trim(header[i]) == name) label_idx = i;
            if (!label_idx) throw InvalidSpec("load_csv: no header column named '" + name + "'");
        }
    }

    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    std::unordered_map<std::string, int> label_ids;
    std::size_t width = 0;

    for (std::size_t li = data_start; li < lines.size(); ++li) {
        if (trim(lines[li]).empty()) continue;
        const long line_no = static_cast<long>(li + 1);
        std::vector<std::string> fields = split_line(lines[li], delim);
        if (width == 0) {
            width = fields.size();
            if (label_idx && *label_idx >= width)
                throw InvalidSpec("load_csv: label column index out of range");
        } else if (fields.size() != width) {
            throw ParseError("load_csv: ragged row", line_no);
        }

        std::vector<double> feat;
        feat.reserve(width);
        for (std::size_t c = 0; c < width; ++c) {
            const std::string value = trim(fields[c]);
            if (label_idx && c == *label_idx) {
                auto [it, inserted] =
                    label_ids.emplace(value, static_cast<int>(label_ids.size()));
                labels.push_back(it->second);
                continue;
            }
            if (value.empty()) throw ParseError("load_csv: empty field", line_no,
                                                static_cast<long>(c + 1));
            char* end = nullptr;
            const double v = std::strtod(value.c_str(), &end);
            if (end != value.c_str() + value.size() || !std::isfinite(v))
                throw ParseError("load_csv: non-numeric field '" + value + "'", line_no,
                                 static_cast<long>(c + 1));
            feat.push_back(v);
        }
        rows.push_back(std::move(feat));
    }
    if (rows.empty()) throw EmptyData("load_csv: no data rows");

    Dataset d;
    d.features = Matrix::from_rows(rows);
    d.labels = std::move(labels);
    d.has_labels = label_idx.has_value();
    d.name = path;
    return d;
}

void save_csv(const Dataset& d, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw IoError("save_csv: cannot open " + path + " for writing");
    for (std::size_t i = 0; i < d.size(); ++i) {
        for (std::size_t j = 0; j < d.dim(); ++j)
            std::fprintf(f, "%s%.17g", j == 0 ? "" : ",", d.features(i, j));
        if (d.has_labels) std::fprintf(f, ",%d", d.labels[i]);
        std::fputc('\n', f);
    }
    std::fclose(f);
}

void save_matrix_csv(const Matrix& m, const std::string& path,
                     const std::vector<std::string>& header) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw IoError("save_matrix_csv: cannot open " + path + " for writing");
    if (!header.empty()) {
        for (std::size_t j = 0; j < header.size(); ++j)
            std::fprintf(f, "%s%s", j == 0 ? "" : ",", header[j].c_str());
        std::fputc('\n', f);
    }
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j)
            std::fprintf(f, "%s%.17g", j == 0 ? "" : ",", m(i, j));
        std::fputc('\n', f);
    }
    std::fclose(f);
}

Dataset standardize(const Dataset& d) {
    Dataset out = d;
    out.constant_features.clear();
    const std::size_t n = d.size();
    for (std::size_t j = 0; j < d.dim(); ++j) {
        double mu = 0.0;
        for (std::size_t i = 0; i < n; ++i) mu += d.features(i, j);
        mu /= static_cast<double>(n);
        double var = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double c = d.features(i, j) - mu;
            var += c * c;
        }
        var /= static_cast<double>(n);
        if (var == 0.0) {
            out.constant_features.push_back(j);
            continue;
        }
        const double inv = 1.0 / std::sqrt(var);
        for (std::size_t i = 0; i < n; ++i) out.features(i, j) = (d.features(i, j) - mu) * inv;
    }
    return out;
}

Subsample subsample(const Matrix& features, std::size_t n, std::uint64_t seed) {
    const std::size_t total = features.rows();
    if (n < 1 || n > total) throw InvalidSize("subsample: need 1 <= n <= N");
    std::vector<std::size_t> idx(total);
    std::iota(idx.begin(), idx.end(), 0);
    SeededRng rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.next_below(total - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(n);

    Subsample out;
    out.points = Matrix(n, features.cols());
    for (std::size_t i = 0; i < n; ++i)
        std::copy(features.row(idx[i]).begin(), features.row(idx[i]).end(),
                  out.points.row(i).begin());
    out.indices = std::move(idx);
    return out;
}

Subsample subsample(const Dataset& d, std::size_t n, std::uint64_t seed) {
    return subsample(d.features, n, seed);
}

int paper_n(int total) {
    return std::max(200, static_cast<int>(std::llround(total / 100.0)));
}

}  // namespace kjl
