#ifndef CCBOUNDS_CLI_HPP
#define CCBOUNDS_CLI_HPP

namespace ccbounds::cli {

/**
 * Full command-line surface. Returns the process exit status:
 * 0 success, 1 failed certification or decode, 2 usage or parse error.
 */
int run(int argc, const char* const* argv);

}  // namespace ccbounds::cli

#endif
