#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "swnet/feasibility.hpp"
#include "swnet/gaussian.hpp"

namespace swnet {

using Json = nlohmann::json;
using OJson = nlohmann::ordered_json;

// Schema violation; `pointer` locates the offending key (JSON pointer).
struct SpecError : InputError {
    std::string pointer;
    SpecError(std::string ptr, const std::string& msg) : InputError(ptr + ": " + msg), pointer(std::move(ptr)) {}
};

struct SpecFile {
    NetworkSpec net;
    std::optional<AuxSpec> aux;
    std::optional<JointDistribution> input;
    std::optional<std::vector<double>> rates;
};

SpecFile parse_spec(const Json& doc);
SpecFile load_spec(const std::string& path);
// Input pmf file: {"marginals": [...]} | {"alphabet": [...], "pmf": [...]} | "uniform".
JointDistribution parse_input(const Json& j, const NetworkSpec& net, const std::string& where = "/input");

// Pretty JSON with doubles at 17 significant digits; non-finite numbers become null.
std::string dump_json(const OJson& j);

OJson to_json(const CutReport& c, const GroundSet& g);
OJson to_json(const FeasibilityReport& r, const GroundSet& g);
OJson to_json(const GaussianCutResult& c, const GroundSet& g);

}  // namespace swnet
