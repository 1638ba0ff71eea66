#include <CLI11.hpp>

#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "commands.hpp"
#include "config.hpp"
#include "fluxlab/error.hpp"

namespace {

const std::vector<std::pair<std::string, std::string>> commands = {
    {"profile", "write an analytic profile or ansatz"},
    {"stationary", "solve for a stationary state with Newton"},
    {"continue", "continue a stationary branch in k"},
    {"spectrum", "linear stability spectrum of a stationary state"},
    {"sweep", "stability along a branch"},
    {"evolve", "time evolution of a state"},
    {"collide", "two-soliton collision"},
    {"particle", "particle model for dips"},
    {"figure", "reproduce a figure by id (\"list\" prints the ids)"},
};

struct Bound {
  cli::Key key;
  CLI::Option* opt = nullptr;
  std::string value;
  bool set = false;
};

struct Sub {
  CLI::App* app = nullptr;
  std::vector<std::unique_ptr<Bound>> keys;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fluxlab: coupled condensates with a Josephson coupling"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_file, figure_id;
  app.add_option("--config", config_file, "TOML-style key file; flags override it")->check(CLI::ExistingFile);

  std::vector<std::pair<std::string, Sub>> subs;
  for (const auto& [name, help] : commands) {
    Sub s;
    s.app = app.add_subcommand(name, help);
    for (const auto& k : cli::keys_for(name)) {
      auto b = std::make_unique<Bound>();
      b->key = k;
      std::string names = "--" + k.name;
      if (!k.alias.empty()) names += "," + k.alias;
      const std::string help_text = k.help + " [" + k.value + "]";
      if (k.is_flag)
        b->opt = s.app->add_flag(names, b->set, help_text);
      else
        b->opt = s.app->add_option(names, b->value, help_text);
      s.keys.push_back(std::move(b));
    }
    if (name == "figure") s.app->add_option("id", figure_id, "figure id, e.g. 5 or 5a")->required();
    subs.emplace_back(name, std::move(s));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    for (auto& [name, s] : subs) {
      if (!s.app->parsed()) continue;
      std::vector<cli::Key> declared;
      for (const auto& b : s.keys) declared.push_back(b->key);
      cli::Config c(declared);
      if (!config_file.empty()) c.load_file(config_file);
      for (const auto& b : s.keys)
        if (b->opt->count() > 0) c.set(b->key.name, b->key.is_flag ? "true" : b->value);
      if (name == "figure") {
        if (figure_id == "list") {
          for (const auto& id : cli::figure_ids()) std::printf("%s\n", id.c_str());
          return 0;
        }
        return cli::run_figure(figure_id, c.str("output.dir"), c.flag("output.svg"));
      }
      return cli::run_command(name, c);
    }
  } catch (const cli::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const fluxlab::DomainError& e) {
    std::fprintf(stderr, "invalid input: %s\n", e.what());
    return 2;
  } catch (const fluxlab::NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  }
  return 2;
}
