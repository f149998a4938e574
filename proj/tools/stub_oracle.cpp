// Membership oracle server for a formula target, speaking the JSON-lines
// protocol on stdin/stdout or on a TCP port.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <unistd.h>

#include "hornenv/errors.hpp"
#include "hornenv/formula_io.hpp"
#include "hornenv/harness.hpp"
#include "hornenv/oracle.hpp"
#include "hornenv/wire.hpp"

int main(int argc, char** argv) {
  CLI::App app{"hornenv stub oracle"};
  std::string target_path;
  std::string schema_path;
  std::optional<int> tcp_port;
  bool once = false;
  app.add_option("--target", target_path, "target formula file")->required()->check(CLI::ExistingFile);
  app.add_option("--schema", schema_path, "attribute schema fixing variable order")->check(CLI::ExistingFile);
  app.add_option("--tcp", tcp_port, "listen on this port (0 = any) instead of stdio");
  app.add_flag("--once", once, "with --tcp, exit after the first session");
  CLI11_PARSE(app, argc, argv);

  try {
    hornenv::VariableUniverse vars;
    hornenv::Formula target;
    const std::string text = hornenv::read_text_file(target_path);
    if (!schema_path.empty()) {
      vars = hornenv::schema_to_universe(hornenv::load_schema(schema_path));
      target = hornenv::parse_formula(text, vars);
    } else {
      auto parsed = hornenv::parse_formula(text);
      vars = parsed.vars;
      target = parsed.formula;
    }
    hornenv::FormulaOracle oracle(target);

    if (!tcp_port) {
      hornenv::FdChannel channel(STDIN_FILENO, STDOUT_FILENO);
      hornenv::serve_membership(channel, oracle, vars);
      return 0;
    }
    hornenv::TcpListener listener(static_cast<std::uint16_t>(*tcp_port));
    std::fprintf(stderr, "listening on port %u\n", static_cast<unsigned>(listener.port()));
    std::fflush(stderr);
    do {
      auto channel = listener.accept();
      try {
        hornenv::serve_membership(*channel, oracle, vars);
      } catch (const hornenv::TransportError& e) {
        std::fprintf(stderr, "session ended: %s\n", e.what());
      }
    } while (!once);
    return 0;
  } catch (const hornenv::Error& e) {
    std::fprintf(stderr, "hornenv-stub-oracle: %s\n", e.what());
    return 2;
  }
}
