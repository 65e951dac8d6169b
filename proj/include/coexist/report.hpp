#pragma once

#include <nlohmann/json.hpp>

#include "coexist/conditions.hpp"
#include "coexist/hammerstein.hpp"
#include "coexist/philap.hpp"
#include "coexist/planar_bump.hpp"

namespace coexist {

using ojson = nlohmann::ordered_json;

ojson to_json(const KernelConstants& k);
ojson to_json(const KernelBoundsReport& r);
ojson to_json(const CertCheck& c);
ojson to_json(const Certificate& c);
ojson to_json(const ConditionReport& c);
ojson to_json(const Localization& l);
ojson to_json(const SolverResult& r);
ojson to_json(const AsymptoticsReport& r);
ojson to_json(const BumpReport& r);

uint64_t fnv1a64(const std::string& bytes);

// Fills "content-hash" with the FNV-1a hash of the report serialized without
// the volatile fields ("timings-ms" and the hash itself).
void finalize_report(ojson& report);

// Report serialization with the volatile fields stripped; two runs with the
// same seed must agree byte for byte on this form.
std::string stable_dump(const ojson& report);

void write_text_file(const std::string& path, const std::string& content);

// CSV with header t,x1,x2 and 17 significant digits per value.
std::string solution_csv(const Grid& g, const dvec& x1, const dvec& x2);

}  // namespace coexist
