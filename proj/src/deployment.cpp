#include "mmcs/deployment.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "json.hpp"

namespace mmcs {

bool contains_operator(OperatorSet s, int op) {
    if (op == 1) return s != OperatorSet::op2_only;
    if (op == 2) return s != OperatorSet::op1_only;
    throw std::invalid_argument("contains_operator: operator must be 1 or 2");
}

const char* to_string(OperatorSet s) {
    switch (s) {
        case OperatorSet::op1_only: return "op1";
        case OperatorSet::op2_only: return "op2";
        case OperatorSet::shared: return "shared";
    }
    return "?";
}

double DensityDecomposition::of(OperatorSet s) const {
    switch (s) {
        case OperatorSet::op1_only: return excl_1;
        case OperatorSet::op2_only: return excl_2;
        case OperatorSet::shared: return shared;
    }
    return 0.0;
}

DensityDecomposition decompose_densities(const SharingModel& model) {
    if (model.rho < 0.0 || model.rho > 1.0)
        throw std::invalid_argument("decompose_densities: rho must be in [0,1]");
    if (model.lambda_1 <= 0.0 || model.lambda_2 < 0.0)
        throw std::invalid_argument("decompose_densities: densities must be positive");
    double lambda = (model.lambda_1 + model.lambda_2) / (1.0 + model.rho);
    double shared = model.rho * lambda;
    double e1 = model.lambda_1 - shared;
    double e2 = model.lambda_2 - shared;
    if (e1 < -1e-12 || e2 < -1e-12)
        throw std::invalid_argument(
            "decompose_densities: rho too large for the given per-operator densities");
    return {lambda, shared, std::max(e1, 0.0), std::max(e2, 0.0),
            model.lambda_1 / lambda, 1.0 - model.lambda_2 / lambda};
}

double Site::distance_to(double px, double py) const { return std::hypot(x - px, y - py); }
double Site::distance_to_origin() const { return std::hypot(x, y); }

namespace {

void append_process(std::vector<Site>& sites, double lambda_per_km2, OperatorSet ops,
                    double radius_m, Rng& rng) {
    double area_km2 = std::numbers::pi * radius_m * radius_m * 1e-6;
    int n = rng.poisson(lambda_per_km2 * area_km2);
    for (int i = 0; i < n; ++i) {
        auto [x, y] = rng.disk_point(radius_m);
        sites.push_back({x, y, ops});
    }
}

}  // namespace

Deployment sample_deployment(const SharingModel& model, double region_radius_m, Rng& rng) {
    if (region_radius_m <= 0.0)
        throw std::invalid_argument("sample_deployment: region radius must be positive");
    auto dens = decompose_densities(model);
    Deployment d;
    d.region_radius = region_radius_m;
    for (;;) {
        d.sites.clear();
        append_process(d.sites, dens.excl_1, OperatorSet::op1_only, region_radius_m, rng);
        append_process(d.sites, dens.excl_2, OperatorSet::op2_only, region_radius_m, rng);
        append_process(d.sites, dens.shared, OperatorSet::shared, region_radius_m, rng);
        bool has_op1 = false;
        for (const auto& s : d.sites)
            if (contains_operator(s.operators, 1)) { has_op1 = true; break; }
        if (has_op1) break;
        ++d.resample_count;
    }
    return d;
}

Deployment sample_deployment(const SharingModel& model, double region_radius_m, uint64_t seed) {
    Rng rng(seed);
    Deployment d = sample_deployment(model, region_radius_m, rng);
    d.seed = seed;
    return d;
}

std::vector<int> operator_view(const Deployment& d, int op) {
    std::vector<int> idx;
    for (int i = 0; i < static_cast<int>(d.sites.size()); ++i)
        if (contains_operator(d.sites[i].operators, op)) idx.push_back(i);
    return idx;
}

void dump_jsonl(const Deployment& d, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("dump_jsonl: cannot open " + path);
    nlohmann::json header = {{"region_radius_m", d.region_radius},
                             {"seed", d.seed},
                             {"resample_count", d.resample_count}};
    out << header.dump() << '\n';
    for (const auto& s : d.sites) {
        nlohmann::json ops = nlohmann::json::array();
        if (contains_operator(s.operators, 1)) ops.push_back(1);
        if (contains_operator(s.operators, 2)) ops.push_back(2);
        nlohmann::json line = {{"x_m", s.x}, {"y_m", s.y}, {"operators", ops}};
        out << line.dump() << '\n';
    }
}

Deployment load_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_jsonl: cannot open " + path);
    Deployment d;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("load_jsonl: empty file");
    auto header = nlohmann::json::parse(line);
    d.region_radius = header.at("region_radius_m").get<double>();
    d.seed = header.value("seed", 0ull);
    d.resample_count = header.value("resample_count", 0);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto j = nlohmann::json::parse(line);
        bool op1 = false, op2 = false;
        for (int op : j.at("operators")) {
            if (op == 1) op1 = true;
            else if (op == 2) op2 = true;
            else throw std::runtime_error("load_jsonl: unknown operator id");
        }
        OperatorSet s = op1 && op2 ? OperatorSet::shared
                        : op1      ? OperatorSet::op1_only
                                   : OperatorSet::op2_only;
        if (!op1 && !op2) throw std::runtime_error("load_jsonl: site with no operators");
        d.sites.push_back({j.at("x_m").get<double>(), j.at("y_m").get<double>(), s});
    }
    return d;
}

}  // namespace mmcs
