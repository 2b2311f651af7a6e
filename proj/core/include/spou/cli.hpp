#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "spou/field.hpp"
#include "spou/grid.hpp"

namespace spou::cli {

// "lo:hi:n[:n_directions][:log|lin]"
GridSpec parse_grid_spec(const std::string& text, bool default_log);

// CSV dump of a field on a radial grid: 1-D emits gamma,value; d >= 2 emits
// radius, direction components and value. 17 significant digits throughout.
void emit_grid(const ScalarField& field, const GridSpec& grid, std::ostream& os);

// Exit codes: 0 all checks passed; 1 checks ran and some failed; 2 invalid
// input or refusal; 3 I/O failure.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);  // args without argv[0]

}  // namespace spou::cli
