#pragma once

#include <iosfwd>

namespace bootlex::cli {

/// Entry point of the `bootlex` tool. Returns the process exit code.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bootlex::cli
