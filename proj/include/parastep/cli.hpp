#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace parastep {

/// Entry point of `parastep classify|orbit|probe|validate <spec.json> [flags]`.
/// `args` excludes the program name. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace parastep
