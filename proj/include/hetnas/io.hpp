#ifndef HETNAS_IO_HPP
#define HETNAS_IO_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "hetnas/netir.hpp"
#include "hetnas/scheduler.hpp"
#include "hetnas/search.hpp"

namespace hetnas::io {

inline constexpr const char* kToolVersion = "0.1.0";

// ---------------------------------------------------------------------------
// Small utilities
// ---------------------------------------------------------------------------

uint64_t fnv1a64(std::string_view bytes);
std::string hex_digest(std::string_view bytes);  // 16-char FNV-1a hex

std::string read_file(const std::string& path);          // ParseError on failure
void atomic_write_file(const std::string& path, const std::string& content);

std::string csv_quote(const std::string& field);

// Round-trip double formatting (shortest form via %.17g cleanup).
std::string format_double(double v);

// ---------------------------------------------------------------------------
// Search spaces and choices
// ---------------------------------------------------------------------------

std::string space_to_json(const netir::SearchSpace& space);
netir::SearchSpace space_from_json(const std::string& text);

std::string choice_to_json(const netir::SubnetChoice& choice,
                           const netir::SearchSpace& space);
netir::SubnetChoice choice_from_json(const std::string& text,
                                     const netir::SearchSpace& space);

std::string network_to_json(const netir::Network& net);
netir::Network network_from_json(const std::string& text);

// ---------------------------------------------------------------------------
// Schedules and reports
// ---------------------------------------------------------------------------

std::string schedule_to_json(const scheduler::Schedule& schedule);
std::string report_to_json(const scheduler::CostReport& report,
                           const scheduler::CostReport& npu_only,
                           scheduler::Objective objective);

// layer,kind,npu_share,cim_share,npu_ms,cim_ms,energy_nj
std::string report_to_csv(const netir::Network& net,
                          const scheduler::Schedule& schedule,
                          const scheduler::CostReport& report);

// ---------------------------------------------------------------------------
// Fronts
// ---------------------------------------------------------------------------

// acc,latency_s,energy_nj,choice_json
std::string front_to_csv(const search::ParetoFront& front,
                         const netir::SearchSpace& space);
std::string front_to_json(const search::ParetoFront& front,
                          const netir::SearchSpace& space);

std::string block_mix_to_csv(const std::vector<search::BlockMixRow>& rows);

// ---------------------------------------------------------------------------
// Calibration CSV (columns: workload,rate; header row required)
// ---------------------------------------------------------------------------

std::vector<std::pair<double, double>> calibration_from_csv(const std::string& text);

}  // namespace hetnas::io

#endif  // HETNAS_IO_HPP
