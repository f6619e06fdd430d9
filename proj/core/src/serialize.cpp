#include "gsde/serialize.hpp"

#include "gsde/errors.hpp"

#include <json.hpp>

#include <bit>
#include <cstring>
#include <fstream>

namespace gsde {

using nlohmann::json;

std::string distribution_to_json(const EmpiricalSublinearDistribution& dist) {
    json doc;
    doc["dim"] = dist.dimension();
    json measures = json::array();
    for (std::size_t mi = 0; mi < dist.measure_count(); ++mi) {
        const auto& m = dist.measure(mi);
        json pairs = json::array();
        for (std::size_t i = 0; i < m.size(); ++i) {
            json point = json::array();
            for (double v : m.point(i)) point.push_back(v);
            pairs.push_back(json::array({point, m.weight(i)}));
        }
        measures.push_back(pairs);
    }
    doc["measures"] = measures;
    return doc.dump(2);
}

EmpiricalSublinearDistribution distribution_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw InputError(std::string("distribution JSON parse error: ") + e.what());
    }
    if (!doc.contains("dim") || !doc.contains("measures"))
        throw InputError("distribution JSON: missing required key 'dim' or 'measures'");
    const std::size_t dim = doc["dim"].get<std::size_t>();
    std::vector<WeightedMeasure> measures;
    for (const auto& pairs : doc["measures"]) {
        std::vector<double> pts;
        std::vector<double> weights;
        for (const auto& pw : pairs) {
            if (!pw.is_array() || pw.size() != 2)
                throw InputError("distribution JSON: each entry must be [point, weight]");
            const auto& point = pw[0];
            if (point.size() != dim)
                throw InputError("distribution JSON: point dimension mismatch");
            for (const auto& v : point) pts.push_back(v.get<double>());
            weights.push_back(pw[1].get<double>());
        }
        measures.emplace_back(std::move(pts), dim, std::move(weights));
    }
    return EmpiricalSublinearDistribution(std::move(measures));
}

void save_distribution(const EmpiricalSublinearDistribution& dist,
                       const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot open for writing: " + path.string());
    out << distribution_to_json(dist) << '\n';
}

EmpiricalSublinearDistribution load_distribution(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open distribution file: " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return distribution_from_json(text);
}

std::string metric_result_to_json(const MetricResult& result) {
    json doc;
    doc["value"] = result.value;
    doc["dim"] = result.dim;
    doc["direction"] = result.direction;
    doc["attaining_measure"] = result.attaining_measure;
    doc["argmax_time"] = result.argmax_time;
    doc["support"] = result.support;
    doc["witness"] = result.witness;
    return doc.dump(2);
}

namespace {

void put_u32(std::ofstream& out, std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), 4);
}

void put_u64(std::ofstream& out, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), 8);
}

void put_f64(std::ofstream& out, double v) {
    put_u64(out, std::bit_cast<std::uint64_t>(v));
}

} // namespace

void write_ensemble_binary(const PathEnsemble& ens, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot open for writing: " + path.string());
    out.write("GSDEENS1", 8);
    put_u32(out, static_cast<std::uint32_t>(ens.control_count()));
    put_u32(out, static_cast<std::uint32_t>(ens.replicate_count()));
    put_u32(out, static_cast<std::uint32_t>(ens.grid().size()));
    put_u32(out, static_cast<std::uint32_t>(ens.state_dim()));
    put_u32(out, static_cast<std::uint32_t>(ens.driver_dim()));
    put_u64(out, ens.seed());
    for (double t : ens.grid().times()) put_f64(out, t);
    for (std::size_t c = 0; c < ens.control_count(); ++c)
        for (std::size_t r = 0; r < ens.replicate_count(); ++r)
            for (double v : ens.state_path(c, r)) put_f64(out, v);
    for (std::size_t c = 0; c < ens.control_count(); ++c)
        for (std::size_t r = 0; r < ens.replicate_count(); ++r)
            for (double v : ens.driver_path(c, r)) put_f64(out, v);
}

} // namespace gsde
