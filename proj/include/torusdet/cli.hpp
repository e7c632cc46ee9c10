#pragma once

// Command-line front end:
//   det <file>, trace <file>, symbol2matrix <file> --radius N, diagnose <file>,
//   hill check <file>, hill scan <file>
// with global flags --tol, --max-radius, --grid and --format json|csv.
//
// Exit status: 0 success, 2 undecided or not converged, 1 error.

#include <ostream>
#include <string>
#include <vector>

namespace torusdet {

/// args excludes the program name. Results go to out; diagnostics and timing to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace torusdet
