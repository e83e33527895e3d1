// Copyright 2026 The paulest Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: paulest <command> --spec FILE --out DIR

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "paulest/io/commands.hpp"

namespace fs = std::filesystem;

namespace {

void report_error(const std::string& kind, const std::string& message) {
  nlohmann::ordered_json err;
  err["error"] = kind;
  err["message"] = message;
  std::cerr << err.dump() << "\n";
}

// Every file is written to a temporary name first and renamed only once all
// of them are on disk.
void write_outputs(const fs::path& dir, const paulest::io::CommandOutput& output) {
  fs::create_directories(dir);
  std::vector<std::pair<fs::path, fs::path>> staged;
  for (const auto& file : output.files) {
    const fs::path final_path = dir / file.name;
    fs::path tmp = final_path;
    tmp += ".tmp";
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << file.contents;
    out.close();
    if (!out) {
      for (const auto& [t, f] : staged) fs::remove(t);
      fs::remove(tmp);
      throw paulest::ResourceError("cannot write '" + final_path.string() + "'");
    }
    staged.emplace_back(tmp, final_path);
  }
  for (const auto& [tmp, final_path] : staged) fs::rename(tmp, final_path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Estimation of Pauli channels: Fisher information, optimal configurations, simulation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(paulest::kVersion));

  std::string spec_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::string format = "csv";
  unsigned threads = paulest::default_thread_count();

  const std::map<std::string, std::string> help{
      {"fisher", "Fisher matrix, totals and Cramer-Rao bound for given configurations"},
      {"optimal-config", "Closed-form optimal configurations and their information"},
      {"optimize", "Numerical multistart maximization of det F"},
      {"estimate", "Estimate lambdas (and directions) from measured frequencies"},
      {"simulate", "Monte Carlo mean squared error of the estimator"},
      {"sweep", "Monte Carlo over input orthogonality or shot counts"},
  };
  for (const auto& name : paulest::io::command_names()) {
    auto* sub = app.add_subcommand(name, help.at(name));
    sub->add_option("--spec", spec_path, "Spec file (YAML)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "Output directory")->required();
    sub->add_option("--seed", seed, "Override the spec seed");
    sub->add_option("--format", format, "Table format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--threads", threads, "Worker threads (default: PAULEST_THREADS or 1)")
        ->check(CLI::Range(1u, 1024u));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error("invalid_argument", e.what());
    return 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    paulest::io::CommandOptions options;
    options.seed = seed;
    options.format = format == "json" ? paulest::io::OutputFormat::Json : paulest::io::OutputFormat::Csv;
    options.threads = threads;
    const auto doc = paulest::io::load_spec_file(spec_path);
    const auto output = paulest::io::run_command(command, doc, options);
    write_outputs(out_dir, output);
    for (const auto& file : output.files) std::cout << (fs::path(out_dir) / file.name).string() << "\n";
  } catch (const paulest::Error& e) {
    report_error(e.kind(), e.what());
    return paulest::io::exit_code_for(e);
  } catch (const YAML::Exception& e) {
    report_error("invalid_spec", e.what());
    return 2;
  } catch (const std::exception& e) {
    report_error("internal", e.what());
    return 1;
  }
  return 0;
}
