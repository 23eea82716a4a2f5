#pragma once

#include <CLI11.hpp>

#include <memory>
#include <string>
#include <vector>

#include "params.hpp"

namespace regs::cli {

class Command {
 public:
  Command(CLI::App& parent, const std::string& name, const std::string& help);
  virtual ~Command() = default;

  CLI::App* app() const { return app_; }
  // Layers the config file under the command line, then does the work.
  void execute();

 protected:
  virtual void run(const json& user_config) = 0;
  json report(const std::string& kind) const;

  CLI::App* app_;
  Params params_;
  std::string config_path_;
  std::string out_;
};

std::vector<std::unique_ptr<Command>> make_commands(CLI::App& app);

// SVG rendering of a JSON report written by profile, map, sweep, refine or
// bandlimit --mode lower-bound.
std::string render_svg(const json& report);

}  // namespace regs::cli
