#pragma once
// RerankConfig files: a flat JSON object with the keys
//   w_g, w_coor, K, bypass_threshold, top_n, common_cutoff
// Missing keys keep their defaults; unknown keys are rejected.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "coordrank/reranker.h"

namespace coordrank {

RerankConfig parse_config(std::string_view json_text, const RerankConfig& base = {});
RerankConfig load_config(const std::filesystem::path& path,
                         const RerankConfig& base = {});
std::string config_to_json(const RerankConfig& cfg);
void save_config(const RerankConfig& cfg, const std::filesystem::path& path);

// Canonical one-line rendering, e.g.
//   w_g=1 w_coor=0.35 K=2 bypass_threshold=0.99 top_n=10 common_cutoff=200
std::string config_fingerprint(const RerankConfig& cfg);

// FNV-1a 64 of the fingerprint, as 16 lowercase hex digits.
std::string config_hash(const RerankConfig& cfg);
std::uint64_t fnv1a64(std::string_view bytes);

// Shortest decimal that round-trips to `v`.
std::string format_real(double v);

}  // namespace coordrank
