#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

namespace mix::cli {

/// Standalone gnuplot scripts (file name, text) for the figures whose data files exist.
std::vector<std::pair<std::string, std::string>> plot_scripts(const std::set<std::string>& files);

/// Data files a script reads (quoted *.csv names).
std::vector<std::string> script_inputs(const std::string& script);

}  // namespace mix::cli
