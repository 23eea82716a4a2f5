#include <CLI11.hpp>

#include <iostream>

#include "commands.hpp"
#include "regs/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Data-driven local regularity estimation for scattered data"};
  app.require_subcommand(1);
  auto commands = regs::cli::make_commands(app);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  try {
    for (auto& c : commands) {
      if (c->app()->parsed()) c->execute();
    }
  } catch (const regs::cli::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const regs::InvalidSpecError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const regs::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
