#include "simploc/errors.hpp"
#include "simploc/script.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

int execute(const std::string& path, bool check_only, const simploc::script::RunOptions& options) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot read script '" << path << "'\n";
    return 1;
  }
  std::ostringstream text;
  text << in.rdbuf();
  auto dir = std::filesystem::path(path).parent_path();
  simploc::script::Script script;
  try {
    script = simploc::script::parse_script(text.str(), dir.empty() ? "." : dir.string());
  } catch (const simploc::ParseError& e) {
    std::cerr << "error: " << path << ":" << e.line() << ":" << e.column() << ": " << e.message() << "\n";
    return 1;
  }
  if (check_only) return simploc::script::check(script, options, std::cout, std::cerr);
  return simploc::script::run(script, options, std::cout, std::cerr);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simploc: K-theory of simple quotient stacks from construction scripts"};
  app.require_subcommand(1);

  std::string format = "text";
  bool normalize_j = false;
  std::string records_out;
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "records"}));
  app.add_flag("--normalize-j", normalize_j, "Normalize Schubert j-sequences before building towers");
  app.add_option("--records-out", records_out, "Also write structured records to this file");

  std::string script_path;
  auto run = app.add_subcommand("run", "Run every command of a script");
  run->add_option("script", script_path, "Script file")->required();
  auto check = app.add_subcommand("check", "Validate and classify definitions only");
  check->add_option("script", script_path, "Script file")->required();
  app.fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // usage errors share the exit code of script errors
    return app.exit(e) == 0 ? 0 : 1;
  }

  simploc::script::RunOptions options;
  options.normalize_j = normalize_j;
  options.format = format == "records" ? simploc::script::OutputFormat::records : simploc::script::OutputFormat::text;
  std::ofstream sidecar;
  if (!records_out.empty()) {
    sidecar.open(records_out);
    if (!sidecar) {
      std::cerr << "error: cannot write '" << records_out << "'\n";
      return 1;
    }
    options.records_sidecar = &sidecar;
  }
  return execute(script_path, check->parsed(), options);
}
