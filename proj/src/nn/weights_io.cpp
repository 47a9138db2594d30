#include "aeolus/nn/weights_io.hpp"

#include "aeolus/core/errors.hpp"

#include "json.hpp"

#include <fstream>

namespace aeolus::nn {

namespace {

constexpr const char* kFormat = "aeolus_weights_v1";

using json = nlohmann::ordered_json;

} // namespace

void save_weights(const std::string& path, const NetworkSpec& spec,
                  const Weights& w) {
    json doc;
    doc["format"] = kFormat;
    doc["fingerprint"] = spec.fingerprint();
    json layers = json::array();
    for (const auto& p : w.params) {
        json entry;
        entry["name"] = p.name;
        entry["shape"] = p.shape;
        entry["data"] = p.data;
        layers.push_back(std::move(entry));
    }
    doc["layers"] = std::move(layers);
    doc["normalization"] = {{"mean", w.norm_mean}, {"std", w.norm_std}};

    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw core::DataError("cannot write weights file: " + path);
    out << doc.dump(1) << '\n';
    if (!out)
        throw core::DataError("failed writing weights file: " + path);
}

Weights load_weights(const std::string& path, const NetworkSpec& spec) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw core::DataError("cannot read weights file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw core::DataError("malformed weights file " + path + ": " +
                              e.what());
    }
    try {
        if (doc.at("format").get<std::string>() != kFormat)
            throw core::DataError("unsupported weights format in " + path);
        if (doc.at("fingerprint").get<std::string>() != spec.fingerprint())
            throw core::DataError(
                "weights file " + path + " was trained for a different "
                "architecture than network '" + spec.name + "'");
        Weights w;
        for (const auto& entry : doc.at("layers")) {
            ParamTensor p;
            p.name = entry.at("name").get<std::string>();
            p.shape = entry.at("shape").get<std::vector<std::size_t>>();
            p.data = entry.at("data").get<std::vector<double>>();
            std::size_t n = 1;
            for (std::size_t d : p.shape)
                n *= d;
            if (n != p.data.size())
                throw core::DataError("parameter " + p.name + " in " + path +
                                      " has inconsistent shape");
            w.params.push_back(std::move(p));
        }
        const auto& norm = doc.at("normalization");
        w.norm_mean = norm.at("mean").get<std::vector<double>>();
        w.norm_std = norm.at("std").get<std::vector<double>>();
        if (w.norm_mean.size() != w.norm_std.size())
            throw core::DataError("normalization arrays disagree in " + path);
        // Surface missing/mis-shaped parameters now, not at first use.
        for (const auto& p : init_weights(spec, 0).params) {
            const ParamTensor* q = nullptr;
            for (const auto& cand : w.params)
                if (cand.name == p.name) {
                    q = &cand;
                    break;
                }
            if (!q)
                throw core::DataError("weights file " + path +
                                      " is missing parameter " + p.name);
            if (q->shape != p.shape)
                throw core::DataError("parameter " + p.name + " in " + path +
                                      " has the wrong shape");
        }
        return w;
    } catch (const json::exception& e) {
        throw core::DataError("malformed weights file " + path + ": " +
                              e.what());
    }
}

} // namespace aeolus::nn
