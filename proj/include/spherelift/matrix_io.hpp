#ifndef SPHERELIFT_MATRIX_IO_HPP
#define SPHERELIFT_MATRIX_IO_HPP

#include <iosfwd>
#include <string>

#include "spherelift/mat.hpp"

namespace spherelift {

// Coupling-matrix file reader. Two formats, auto-detected:
//   text: line 1 holds k, then k lines of k whitespace-separated floats;
//         '#' starts a comment line
//   json: {"k": int, "entries": [[...], ...]}
// ParseError carries the offending 1-based line number for the text format.
Mat read_matrix_file(const std::string& path);
Mat read_matrix_stream(std::istream& in, const std::string& name = "<stream>");

}  // namespace spherelift

#endif
