#ifndef SLNZ_MATIO_HPP
#define SLNZ_MATIO_HPP

#include <istream>
#include <string>

#include "slnz/intmat.hpp"

namespace slnz {

// Matrix text format: first line "rows cols", then one line per row of
// decimal integers separated by single spaces. Arbitrary precision entries.
// Parse errors carry the offending line number.
IntMat parse_matrix_text(std::istream& in);
IntMat read_matrix_file(const std::string& path);

} // namespace slnz

#endif
