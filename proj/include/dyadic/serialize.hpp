#pragma once

// JSON views of reports. Key order is fixed, so equal inputs give byte-identical text.

#include <string>

#include <json.hpp>

#include "dyadic/construction.hpp"
#include "dyadic/run_config.hpp"
#include "dyadic/spectral.hpp"
#include "dyadic/verify.hpp"

namespace dyadic::json {

using Json = nlohmann::ordered_json;

Json to_json(const Params& p);
Json to_json(const Flags& f);
Json to_json(const EigenBasis& b);
Json to_json(const Mat3& m);
Json to_json(const SpectralReport& r);
Json to_json(const Calibration& c);
Json to_json(const Certificate& c);
Json to_json(const UniquenessReport& r);
Json to_json(const RunConfig& c);

/// Overlays the keys present in `j` onto `base`. Unknown keys throw Input.
RunConfig run_config_from_json(const Json& j, RunConfig base = {});

/// Tool name and version plus the output location; the only part of an artifact that may vary
/// between otherwise identical runs.
Json metadata(const RunConfig& c);

/// Pretty-printed with a trailing newline.
std::string dump(const Json& j);

}  // namespace dyadic::json
