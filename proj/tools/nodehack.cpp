// nodehack: run, inspect and serve node-programming puzzles headlessly.
//
// Exit codes: 0 solved / ok, 1 unsolved, 2 error diagnostics at tick 0 (or an
// unknown node for inspect), 3 I/O, schema or edit errors.

#include <csignal>
#include <iostream>

#include <CLI11.hpp>

#include "nodehack/server.hpp"

#ifndef NODEHACK_DEFAULT_PUZZLE_DIR
#define NODEHACK_DEFAULT_PUZZLE_DIR "puzzles"
#endif

using namespace nodehack;

namespace {

constexpr int kExitSolved = 0;
constexpr int kExitUnsolved = 1;
constexpr int kExitDiagnostics = 2;
constexpr int kExitIo = 3;

std::atomic<bool> g_interrupted{false};

fs::path root() { return puzzle_root(NODEHACK_DEFAULT_PUZZLE_DIR); }

// Tries the path as given, then with .json, then both under the puzzle root.
fs::path resolve_doc(const std::string& arg) {
  fs::path p(arg);
  for (const fs::path& c : {p, fs::path(arg + ".json"), root() / p, root() / (arg + ".json")})
    if (fs::is_regular_file(c)) return c;
  fail(ErrorCode::IoError, "cannot find " + arg);
}

// An edits file may hold an edit list or a whole program; a program is
// turned into the edits that produce it from the puzzle's starting program.
std::vector<Edit> read_player_edits(const PuzzleSpec& spec, const std::string& arg) {
  if (arg.empty()) return {};
  fs::path path = resolve_doc(arg);
  json doc = parse_json_text(read_text_file(path), path.filename().string());
  if (doc.is_object() && doc.contains("nodes"))
    return diff_programs(spec.initial_program(), deserialize_program(doc, spec.signatures()));
  return edits_from_json(doc, path.filename().string());
}

std::string describe(const Diagnostic& d) {
  std::string where = d.at_node + (d.at_port ? "." + *d.at_port : "");
  return std::string(to_string(d.code)) + " at " + where + ": " + d.message;
}

struct RunArgs {
  int id = 0;
  std::string edits;
  std::string trace;
  int ticks = 0;
};

int cmd_run(const RunArgs& a, bool bundled_solution) {
  auto spec = load_puzzle(root(), a.id);
  std::vector<Edit> edits =
      bundled_solution ? load_edits(solution_path(root(), a.id)) : read_player_edits(*spec, a.edits);
  Session s(spec);
  for (const auto& e : edits) s.apply_edit(e);

  std::ofstream file;
  if (!a.trace.empty()) {
    file.open(a.trace, std::ios::binary);
    if (!file) fail(ErrorCode::IoError, "cannot write " + a.trace);
  }
  std::ostream& out = a.trace.empty() ? std::cout : file;

  const int limit = a.ticks > 0 ? a.ticks : spec->tick_limit;
  while (s.ticks() < limit && !s.solved() && !s.failed()) {
    out << compact_text(s.tick()) << '\n';
    if (s.ticks() == 1 && s.last_eval().has_errors()) {
      for (const auto& d : s.last_eval().diagnostics)
        if (d.severity == Severity::Error) std::cerr << describe(d) << '\n';
      std::cerr << "puzzle " << a.id << ": program has errors at tick 0\n";
      return kExitDiagnostics;
    }
  }
  out.flush();
  if (s.solved()) {
    std::cerr << "puzzle " << a.id << ": solved in " << s.ticks() << " ticks\n";
    return kExitSolved;
  }
  std::cerr << "puzzle " << a.id << ": " << (s.failed() ? "failed" : "not solved") << " after " << s.ticks()
            << " ticks\n";
  return kExitUnsolved;
}

int cmd_inspect(int id, const std::string& edits, const std::string& node, const std::string& port, int ticks) {
  auto spec = load_puzzle(root(), id);
  Session s(spec);
  for (const auto& e : read_player_edits(*spec, edits)) s.apply_edit(e);
  for (int i = 0; i < ticks; ++i) s.tick();
  Inspection r;
  try {
    r = s.inspect(node, port);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::UnknownNode && e.code() != ErrorCode::UnknownEndpoint) throw;
    std::cerr << e.what() << '\n';
    return kExitDiagnostics;
  }
  if (r.diagnostic)
    std::cout << describe(*r.diagnostic) << '\n';
  else if (r.value)
    std::cout << display(*r.value) << '\n';
  else
    std::cout << "(" << to_string(r.state) << ")\n";
  return kExitSolved;
}

// Rewrites a document in canonical form; puzzles and programs are round-tripped
// through the typed model so stray fields are rejected.
int cmd_fmt(const std::vector<std::string>& files, bool check) {
  int rc = 0;
  for (const auto& f : files) {
    std::string text = read_text_file(f);
    json doc = parse_json_text(text, f);
    json canon;
    if (doc.is_object() && doc.contains("world"))
      canon = puzzle_to_json(puzzle_from_json(doc, f));
    else if (doc.is_object() && doc.contains("edits"))
      canon = edits_to_json(edits_from_json(doc, f));
    else
      canon = doc;
    std::string out = canonical_text(canon);
    if (out == text) continue;
    if (check) {
      std::cerr << f << ": not canonical\n";
      rc = kExitUnsolved;
    } else {
      write_text_file(f, out);
    }
  }
  return rc;
}

int cmd_serve(ServeOptions opts) {
  auto cache = std::make_shared<PuzzleCache>(root());
  SessionServer server(cache, std::move(opts));
  int port = server.bind();
  std::cerr << "listening on tcp " << port;
  if (server.http_port() > 0) std::cerr << ", http " << server.http_port();
  std::cerr << std::endl;
  std::signal(SIGINT, [](int) { g_interrupted = true; });
  std::signal(SIGTERM, [](int) { g_interrupted = true; });
  server.run(&g_interrupted);
  std::cerr << "shut down\n";
  return kExitSolved;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Headless runner and session server for node-programming puzzles"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "List bundled puzzles");

  int show_id = 0;
  auto* show = app.add_subcommand("show", "Print a puzzle document");
  show->add_option("id", show_id)->required();

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Run a puzzle with player edits, printing one trace record per tick");
  run->add_option("id", run_args.id)->required();
  run->add_option("--edits", run_args.edits, "Edit list or program document");
  run->add_option("--trace", run_args.trace, "Write trace records to this file instead of stdout");
  run->add_option("--ticks", run_args.ticks, "Tick budget (defaults to the puzzle's tick_limit)")->check(CLI::PositiveNumber);

  RunArgs solve_args;
  auto* solve = app.add_subcommand("solve", "Run a puzzle with its bundled reference solution");
  solve->add_option("id", solve_args.id)->required();
  solve->add_option("--trace", solve_args.trace);
  solve->add_option("--ticks", solve_args.ticks)->check(CLI::PositiveNumber);

  int inspect_id = 0, inspect_ticks = 0;
  std::string inspect_edits, inspect_node, inspect_port;
  auto* insp = app.add_subcommand("inspect", "Print one node's output value or diagnostic");
  insp->add_option("id", inspect_id)->required();
  insp->add_option("--edits", inspect_edits);
  insp->add_option("--node", inspect_node)->required();
  insp->add_option("--port", inspect_port);
  insp->add_option("--tick", inspect_ticks, "Ticks to run before inspecting")->check(CLI::NonNegativeNumber);

  std::vector<std::string> fmt_files;
  bool fmt_check = false;
  auto* fmt = app.add_subcommand("fmt", "Rewrite documents in canonical form");
  fmt->add_option("files", fmt_files)->required();
  fmt->add_flag("--check", fmt_check, "Only report files that are not canonical");

  ServeOptions serve_opts;
  std::string ui, load, save;
  int http_port = -1;
  auto* serve = app.add_subcommand("serve", "Run the session server");
  serve->add_option("--port", serve_opts.port, "TCP port for newline-delimited JSON")->capture_default_str();
  serve->add_option("--host", serve_opts.host)->capture_default_str();
  serve->add_option("--http-port", http_port, "Also accept POST /api on this port");
  serve->add_option("--ui", ui, "Directory of static files served over HTTP");
  serve->add_option("--load", load, "Snapshot new sessions start from");
  serve->add_option("--save", save, "Write the session snapshot here when a connection closes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitIo;
  }

  try {
    if (*list) {
      for (const auto& p : list_puzzles(root())) std::cout << p.id << '\t' << p.title << '\n';
      return kExitSolved;
    }
    if (*show) {
      std::cout << canonical_text(puzzle_to_json(*load_puzzle(root(), show_id, false)));
      return kExitSolved;
    }
    if (*run) return cmd_run(run_args, false);
    if (*solve) return cmd_run(solve_args, true);
    if (*insp) return cmd_inspect(inspect_id, inspect_edits, inspect_node, inspect_port, inspect_ticks);
    if (*fmt) return cmd_fmt(fmt_files, fmt_check);
    if (*serve) {
      if (!ui.empty()) {
        serve_opts.ui_dir = ui;
        if (http_port < 0) http_port = 0;
      }
      if (http_port >= 0) serve_opts.http_port = http_port;
      if (!load.empty()) serve_opts.load = load;
      if (!save.empty()) serve_opts.save = save;
      return cmd_serve(std::move(serve_opts));
    }
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return kExitIo;
  }
  return kExitIo;
}
