#pragma once

#include "hjdisc/characteristics.hpp"
#include "hjdisc/grid.hpp"
#include "hjdisc/semigroup.hpp"

#include <string>

namespace hjdisc {

/// 17-significant-digit decimal rendering (round-trip exact doubles).
std::string format_double(double v);

/// Write `text` to `path` atomically (temporary file + rename).
void atomic_write(const std::string& path, const std::string& text);

std::string grid_fn_csv(const GridFn& f);                 // x,value
GridFn parse_grid_fn_csv(const std::string& text);
std::string trace_csv(const EvolutionTrace& trace);       // t,dist,min,max
std::string orbit_csv(const OrbitRecord& orbit);          // t,x,p,u,lambda_avg
std::string stationary_csv(const StationarySolution& s);  // x,u

} // namespace hjdisc
