#include "boc/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "boc/hardness.hpp"

namespace boc {

bool Permutation::is_bijection() const {
    const int k = static_cast<int>(map.size());
    std::vector<bool> seen(k, false);
    for (int v : map) {
        if (v < 1 || v > k || seen[v - 1]) return false;
        seen[v - 1] = true;
    }
    return k > 0;
}

std::vector<int> canonical_labels(const Partition& p) {
    std::vector<int> rename(p.num_clusters + 1, 0);
    std::vector<int> out(p.labels.size());
    int next = 0;
    for (std::size_t m = 0; m < p.labels.size(); ++m) {
        int& r = rename[p.labels[m]];
        if (r == 0) r = ++next;
        out[m] = r;
    }
    return out;
}

std::vector<std::string> validate_instance(const Instance& inst, bool require_distinct_centers) {
    std::vector<std::string> violations;
    const int m = inst.num_arms();
    const int k = inst.num_clusters();

    if (m < 2) violations.push_back("fewer than 2 arms");
    if (k < 1) violations.push_back("no clusters declared");
    if (k >= m) violations.push_back("K<M required");

    std::vector<int> counts(std::max(k, 0), 0);
    for (int i = 0; i < m; ++i) {
        const int label = inst.partition.labels[i];
        if (label < 1 || label > k) {
            violations.push_back("arm " + std::to_string(i + 1) + " label out of range");
        } else {
            ++counts[label - 1];
        }
    }
    for (int c = 0; c < k; ++c)
        if (counts[c] == 0) violations.push_back("cluster " + std::to_string(c + 1) + " empty");

    if (static_cast<int>(inst.centers.size()) != k) {
        violations.push_back("center count differs from K");
        return violations;
    }
    const std::size_t d = inst.centers.empty() ? 0 : inst.centers.front().size();
    for (const auto& c : inst.centers)
        if (c.size() != d) violations.push_back("centers have inconsistent dimension");

    if (require_distinct_centers) {
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j)
                if (inst.centers[i] == inst.centers[j])
                    violations.push_back("clusters " + std::to_string(i + 1) + " and " +
                                         std::to_string(j + 1) + " share a center");
    }
    return violations;
}

bool partitions_equivalent(const Partition& a, const Partition& b) {
    if (a.labels.size() != b.labels.size())
        throw std::invalid_argument("partitions_equivalent: length mismatch");
    if (a.num_clusters != b.num_clusters)
        throw std::invalid_argument("partitions_equivalent: cluster count mismatch");
    return canonical_labels(a) == canonical_labels(b);
}

bool instances_equivalent(const Instance& a, const Instance& b, double tol) {
    if (a.num_arms() != b.num_arms() || a.dim() != b.dim())
        throw std::invalid_argument("instances_equivalent: shape mismatch");
    for (int m = 0; m < a.num_arms(); ++m)
        if (dist(a.arm_mean(m), b.arm_mean(m)) > tol) return false;
    return true;
}

int hamming_distance(const Partition& a, const Partition& b) {
    if (a.labels.size() != b.labels.size())
        throw std::invalid_argument("hamming_distance: length mismatch");
    int count = 0;
    for (std::size_t m = 0; m < a.labels.size(); ++m)
        if (a.labels[m] != b.labels[m]) ++count;
    return count;
}

Instance apply_permutation(const Instance& inst, const Permutation& perm) {
    if (static_cast<int>(perm.map.size()) != inst.num_clusters() || !perm.is_bijection())
        throw std::invalid_argument("apply_permutation: mapping is not a bijection on 1..K");
    Instance out;
    out.partition.num_clusters = inst.num_clusters();
    out.partition.labels.reserve(inst.num_arms());
    for (int label : inst.partition.labels) out.partition.labels.push_back(perm.map[label - 1]);
    out.centers.resize(inst.centers.size());
    for (int k = 1; k <= inst.num_clusters(); ++k) out.centers[perm.map[k - 1] - 1] = inst.centers[k - 1];
    return out;
}

Instance synthetic_instance(SyntheticKind kind) {
    Instance inst;
    inst.partition.labels = {1, 1, 2, 2, 2, 2, 3, 3, 3, 4, 4};
    inst.partition.num_clusters = 4;
    inst.centers = {{0, 0, 0}, {0, 10, 0}, {0, 0, 10}, {},};
    switch (kind) {
        case SyntheticKind::easy: inst.centers[3] = {5, 0, 0}; break;
        case SyntheticKind::moderate: inst.centers[3] = {1, 0, 0}; break;
        case SyntheticKind::challenging: inst.centers[3] = {0.5, 0, 0}; break;
    }
    return inst;
}

namespace {

std::vector<std::string> split_row(const std::string& line, char delimiter) {
    std::vector<std::string> fields;
    if (delimiter == ' ') {
        std::istringstream in(line);
        std::string tok;
        while (in >> tok) fields.push_back(tok);
        return fields;
    }
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, delimiter)) fields.push_back(field);
    return fields;
}

bool parse_double(const std::string& s, double& out) {
    try {
        std::size_t pos = 0;
        out = std::stod(s, &pos);
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        return pos == s.size();
    } catch (const std::exception&) {
        return false;
    }
}

}  // namespace

Instance load_dataset(const std::string& path, int feature_count, const DatasetOptions& opts) {
    if (feature_count < 1) throw std::invalid_argument("load_dataset: feature_count must be positive");
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_dataset: cannot open " + path);

    std::vector<Vec> rows;
    std::vector<int> labels;
    std::vector<std::string> class_names;  // index = label-1, in first-occurrence order

    std::string line;
    int line_no = 0;
    bool skipped_header = !opts.skip_header;
    while (std::getline(in, line)) {
        ++line_no;
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        if (!skipped_header) {
            skipped_header = true;
            continue;
        }
        const auto fields = split_row(line, opts.delimiter);
        const int label_col = opts.label_column >= 0 ? opts.label_column
                                                     : static_cast<int>(fields.size()) - 1;
        if (label_col < feature_count || label_col >= static_cast<int>(fields.size()))
            throw std::runtime_error("load_dataset: row " + std::to_string(line_no) +
                                     " of " + path + " has too few columns");
        Vec features(feature_count);
        for (int j = 0; j < feature_count; ++j) {
            // features occupy the d columns immediately before the label
            const auto& tok = fields[label_col - feature_count + j];
            if (!parse_double(tok, features[j]))
                throw std::runtime_error("load_dataset: non-numeric feature '" + tok +
                                         "' at row " + std::to_string(line_no) + " of " + path);
        }
        std::string cls = fields[label_col];
        auto it = std::find(class_names.begin(), class_names.end(), cls);
        int label;
        if (it == class_names.end()) {
            class_names.push_back(cls);
            label = static_cast<int>(class_names.size());
        } else {
            label = static_cast<int>(it - class_names.begin()) + 1;
        }
        rows.push_back(std::move(features));
        labels.push_back(label);
    }

    const int m = static_cast<int>(rows.size());
    const int k = static_cast<int>(class_names.size());
    if (k < 2 || k >= m)
        throw std::runtime_error("load_dataset: " + path + ": K >= M or single cluster (M=" +
                                 std::to_string(m) + ", K=" + std::to_string(k) + ")");

    Instance inst;
    inst.partition.labels = std::move(labels);
    inst.partition.num_clusters = k;
    inst.centers.assign(k, Vec(feature_count, 0.0));
    std::vector<int> counts(k, 0);
    for (int i = 0; i < m; ++i) {
        const int c = inst.partition.labels[i] - 1;
        ++counts[c];
        for (int j = 0; j < feature_count; ++j) inst.centers[c][j] += rows[i][j];
    }
    for (int c = 0; c < k; ++c)
        for (int j = 0; j < feature_count; ++j) inst.centers[c][j] /= counts[c];
    return inst;
}

RescaleResult rescale_to_hardness(const Instance& inst, double target) {
    if (!(target > 0)) throw std::invalid_argument("rescale_to_hardness: target must be positive");
    const auto violations = validate_instance(inst, true);
    if (!violations.empty())
        throw std::invalid_argument("rescale_to_hardness: instance not admissible: " + violations.front());

    const double d_star = solve_dstar(inst).d_star;
    const double scale = std::sqrt(d_star / target);
    RescaleResult out{inst, scale};
    for (auto& center : out.instance.centers)
        for (double& x : center) x *= scale;
    return out;
}

Instance read_instance_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_instance_json: cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw std::runtime_error("read_instance_json: " + path + ": " + e.what());
    }

    Instance inst;
    const int d = j.at("d").get<int>();
    inst.partition.num_clusters = j.at("K").get<int>();
    inst.partition.labels = j.at("labels").get<std::vector<int>>();
    for (const auto& row : j.at("centers")) {
        Vec c = row.get<Vec>();
        if (static_cast<int>(c.size()) != d)
            throw std::runtime_error("read_instance_json: " + path + ": center dimension differs from d");
        inst.centers.push_back(std::move(c));
    }
    if (static_cast<int>(inst.centers.size()) != inst.partition.num_clusters)
        throw std::runtime_error("read_instance_json: " + path + ": center count differs from K");
    for (int label : inst.partition.labels)
        if (label < 1 || label > inst.partition.num_clusters)
            throw std::runtime_error("read_instance_json: " + path + ": label out of 1..K");
    return inst;
}

void write_instance_json(const std::string& path, const Instance& inst) {
    nlohmann::json j;
    j["d"] = inst.dim();
    j["K"] = inst.num_clusters();
    j["labels"] = inst.partition.labels;
    j["centers"] = inst.centers;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_instance_json: cannot open " + path);
    out << j.dump(2) << "\n";
    if (!out) throw std::runtime_error("write_instance_json: failed writing " + path);
}

}  // namespace boc
