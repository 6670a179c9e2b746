#pragma once

#include <string>

#include "json.hpp"

#include "grauert/expr.hpp"
#include "grauert/fourier.hpp"
#include "grauert/symbol.hpp"

namespace grauert {

using Json = nlohmann::json;

Json group_to_json(const GroupSpec&);
GroupSpec group_from_json(const Json&);

Json dual_to_json(const GroupSpec&, const std::vector<Irrep>&);
std::vector<Irrep> dual_from_json(const Json&, const GroupSpec&);

Json coeffs_to_json(const GroupSpec&, const FourierCoefficients&);
FourierCoefficients coeffs_from_json(const Json&);

Json symbol_to_json(const Symbol&);
Symbol symbol_from_json(const Json&);

Json expr_to_json(const ExprPtr&);
ExprPtr expr_from_json(const Json&);

Json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const Json&);

// FNV-1a content digest of the canonical dump, for run records
std::string json_digest(const Json&);

}  // namespace grauert
