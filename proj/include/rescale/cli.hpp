#pragma once

#include "rescale/errors.hpp"
#include "rescale/gaussmodel.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rescale::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kDataError = 2,
    kVerifyFailed = 3,
};

/// Malformed command-line argument; maps to exit code 1.
class UsageError : public Error {
public:
    using Error::Error;
};

/// Runs one command line. `args[0]` is the program name. Normal output goes to
/// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "1,2,3"
Vector parse_vector(std::string_view text);

/// Rows separated by ';', entries by ','.
Matrix parse_matrix(std::string_view text);

/// A fixed mean on the command line: "mean" for the data mean, a single
/// number broadcast to every coordinate, or a full comma-separated vector.
Vector resolve_mean(std::string_view token, const Vector& data_mean);

/// "a..b" or a single "a".
std::pair<long, long> parse_range(std::string_view text);

}  // namespace rescale::cli
