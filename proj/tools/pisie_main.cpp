// pisie: run instruction sequences through the lab's mechanisms, compare
// them, and classify the resulting traces.
//
// Exit codes: 0 success; 1 the tool worked and the answer is negative
// (fault, non-equivalence, explosion, invalid program); 2 usage or IO error.

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pisie/compile.hpp"
#include "pisie/engine.hpp"
#include "pisie/errors.hpp"
#include "pisie/inseqex.hpp"
#include "pisie/mechanism.hpp"
#include "pisie/trace_io.hpp"

namespace {

using namespace pisie;
namespace fs = std::filesystem;

std::uint64_t default_fuel() {
  if (const char* env = std::getenv("PISIE_FUEL")) {
    char* end = nullptr;
    const unsigned long long value = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && value > 0) return value;
    std::cerr << "warning: ignoring malformed PISIE_FUEL\n";
  }
  return 100000;
}

std::string trace_stem(const std::string& path) {
  std::string out = path;
  const std::string suffix = ".trace.json";
  if (out.size() > suffix.size() &&
      out.compare(out.size() - suffix.size(), suffix.size(), suffix) == 0) {
    return out.substr(0, out.size() - suffix.size());
  }
  return fs::path(out).replace_extension("").string();
}

std::string default_trace_path(const std::string& program_path) {
  return trace_stem(program_path) + ".trace.json";
}

struct TraceSink {
  std::string subject_path;
  std::optional<std::string> store_dir;
  std::vector<std::string> written;

  void write_subject(const Run& run) {
    write_json_file(subject_path, run_to_json(run));
    written.push_back(subject_path);
    store(run);
  }
  void write_aux(const Run& run, const std::string& tag) {
    const std::string path = trace_stem(subject_path) + "." + tag + ".trace.json";
    write_json_file(path, run_to_json(run));
    written.push_back(path);
    store(run);
  }
  void write_object(const ObjectSequence& object) {
    const std::string path = trace_stem(subject_path) + ".isqo";
    write_text_file(path, render_object(object) + "\n");
    written.push_back(path);
  }
  void store(const Run& run) {
    if (!store_dir) return;
    fs::create_directories(*store_dir);
    const std::string path =
        (fs::path(*store_dir) / (run.run_id + ".trace.json")).string();
    write_json_file(path, run_to_json(run));
    written.push_back(path);
  }
};

void print_status(const Run& run) {
  std::cout << "status: ";
  switch (run.status.kind) {
    case StatusKind::Terminated:
      std::cout << "terminated value="
                << (run.status.value ? (*run.status.value ? "true" : "false") : "none");
      break;
    case StatusKind::Divergence:
      std::cout << "divergence by="
                << (run.status.by == DivergenceBy::Fuel ? "fuel" : "cycle");
      break;
    case StatusKind::Fault:
      std::cout << "fault reason=" << run.status.fault_reason;
      break;
  }
  std::cout << "\n";
  auto result = result_of(run);
  std::cout << "result: " << (result ? (*result ? "true" : "false") : "meaningless")
            << "\n";
}

struct ModeOptions {
  EngineConfig cfg;
  std::optional<std::string> layout_path;
  std::optional<std::string> interpreter_path;
  std::uint64_t jit_window = 0;  // fragment mode; 0 = not given
  bool certify = true;
};

EncodingLayout load_layout(const ModeOptions& opts, const InterfaceSpec& iface) {
  if (!opts.layout_path) {
    throw CLI::ValidationError("--layout is required for this mode");
  }
  return layout_from_json(read_json_file(*opts.layout_path), iface);
}

InstructionSequence pick_interpreter(const ModeOptions& opts, const InterfaceSpec& iface,
                                     const EncodingLayout& layout) {
  InstructionSequence y = opts.interpreter_path
                              ? parse_program(read_text_file(*opts.interpreter_path))
                              : generate_interpreter(iface, layout);
  if (opts.certify) {
    certify_uniformity(y, iface, layout, CertSample::random(32, 20240901));
  }
  return y;
}

// One mechanism over a parsed program or expression; auxiliary runs go
// through the sink when one is given.
Run run_mode(const std::string& mode, const InstructionSequence& seq,
             const InseqexPtr& expr, const ServiceFamily& fam, const ModeOptions& opts,
             TraceSink* sink) {
  auto aux = [&](const Run& run, const std::string& tag) {
    if (sink) sink->write_aux(run, tag);
  };
  if (mode == "direct") {
    return run_direct(seq, fam, opts.cfg);
  }
  if (mode == "interpret") {
    EncodingLayout layout = load_layout(opts, fam.iface());
    InstructionSequence y = pick_interpreter(opts, fam.iface(), layout);
    InterpretedRun out = run_interpreted_with(y, seq, fam, layout, opts.cfg);
    aux(out.interpreter_run, "interpreter");
    return out.subject_run;
  }
  if (mode == "compile-object") {
    if (sink) {
      sink->write_object(std::get<ObjectSequence>(compile_object(seq).output));
    }
    CompiledObjectRun out = run_compiled_object(seq, fam, opts.cfg);
    aux(out.object_run, "object");
    return out.subject_run;
  }
  if (mode == "compile-intermediate") {
    EncodingLayout layout = load_layout(opts, fam.iface());
    CompiledIntermediateRun out = run_compiled_intermediate(seq, fam, layout, opts.cfg);
    aux(out.intermediate_run, "intermediate");
    aux(out.interpreter_run, "interpreter");
    return out.subject_run;
  }
  if (mode == "fragment") {
    if (opts.jit_window == 0) {
      throw CLI::ValidationError("--window is required for fragment mode");
    }
    return run_fragmented(expr, fam, opts.jit_window, opts.cfg);
  }
  throw CLI::ValidationError("unknown mode: " + mode);
}

std::string entry_text(const TraceEntry& entry) {
  return entry.focus + "." + std::string(method_name(entry.method)) + " -> " +
         (entry.reply ? "true" : "false");
}

void print_projection_diff(const std::string& mode_a, const Run& a,
                           const std::string& mode_b, const Run& b) {
  TargetProjection pa = target_projection(a);
  TargetProjection pb = target_projection(b);
  std::cout << "divergence between " << mode_a << " and " << mode_b << ":\n";
  const std::size_t n = std::max(pa.actions.size(), pb.actions.size());
  for (std::size_t i = 0; i < n; ++i) {
    const std::string left = i < pa.actions.size() ? entry_text(pa.actions[i]) : "-";
    const std::string right = i < pb.actions.size() ? entry_text(pb.actions[i]) : "-";
    if (left != right) {
      std::cout << "  target action " << i + 1 << ": " << mode_a << " " << left << " | "
                << mode_b << " " << right << "\n";
      return;
    }
  }
  std::cout << "  statuses differ\n";
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const SyntaxError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DanglingProvenance& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    // the tool ran; the answer is negative (too long, unencodable, ...)
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"a lab for putting instruction sequences into effect"};
  app.require_subcommand(1);

  // ---- run ----
  std::string program_path, family_path, mode = "direct", trace_path;
  std::string layout_path, interpreter_path, store_dir;
  std::uint64_t fuel = default_fuel();
  std::uint64_t window = 0;
  std::string paging = "hardware";
  bool simulate = false, reorder = false, cycle_detect = false, no_certify = false;

  CLI::App* run_cmd = app.add_subcommand("run", "put a program into effect");
  run_cmd->add_option("program", program_path, "program file (.isq; .isqx for fragment)")
      ->required();
  run_cmd->add_option("family", family_path, "service family file (.fam.json)")
      ->required();
  run_cmd->add_option("--mode", mode,
                      "direct|interpret|compile-object|compile-intermediate|fragment");
  run_cmd->add_option("--trace", trace_path, "subject trace output path");
  run_cmd->add_option("--layout", layout_path, "encoding layout (.layout.json)");
  run_cmd->add_option("--interpreter", interpreter_path, "interpreter override (.isq)");
  run_cmd->add_option("--store", store_dir, "directory to store all runs by run_id");
  run_cmd->add_option("--fuel", fuel, "step budget (default $PISIE_FUEL or 100000)");
  run_cmd->add_option("--window", window,
                      "loaded window (paging) or fragment size (fragment mode)");
  run_cmd->add_option("--paging", paging, "hardware|code_controlled");
  run_cmd->add_flag("--simulate", simulate, "record target actions without applying");
  run_cmd->add_flag("--reorder", reorder, "step the canonical co-target reorder");
  run_cmd->add_flag("--cycle-detection", cycle_detect, "detect exact state repeats");
  run_cmd->add_flag("--no-certify", no_certify, "skip interpreter certification");

  // ---- compare ----
  std::string cmp_program, cmp_family, cmp_layout, cmp_interpreter;
  std::vector<std::string> cmp_modes;
  std::uint64_t cmp_fuel = default_fuel(), cmp_window = 0;
  CLI::App* cmp_cmd = app.add_subcommand(
      "compare", "run several mechanisms and require target-equivalence");
  cmp_cmd->add_option("program", cmp_program)->required();
  cmp_cmd->add_option("family", cmp_family)->required();
  cmp_cmd->add_option("--modes", cmp_modes, "comma-separated mechanism list")
      ->required()
      ->delimiter(',');
  cmp_cmd->add_option("--layout", cmp_layout);
  cmp_cmd->add_option("--interpreter", cmp_interpreter);
  cmp_cmd->add_option("--fuel", cmp_fuel);
  cmp_cmd->add_option("--window", cmp_window);

  // ---- classify ----
  std::string cls_trace, cls_store, cls_out;
  CLI::App* cls_cmd = app.add_subcommand("classify", "classify a stored trace");
  cls_cmd->add_option("trace", cls_trace)->required();
  cls_cmd->add_option("--store", cls_store, "directory of .trace.json runs")->required();
  cls_cmd->add_option("--out", cls_out, "report path (.report.json)");

  // ---- gen-interp ----
  std::string gen_iface_path, gen_layout_path, gen_out;
  CLI::App* gen_cmd = app.add_subcommand("gen-interp", "generate an interpreter");
  gen_cmd->add_option("--interface", gen_iface_path, "family file naming the interface")
      ->required();
  gen_cmd->add_option("--layout", gen_layout_path)->required();
  gen_cmd->add_option("-o,--output", gen_out)->required();

  // ---- expand ----
  std::string exp_path, exp_out;
  std::uint64_t exp_bound = 1000000;
  CLI::App* exp_cmd = app.add_subcommand("expand", "expand an expression (.isqx)");
  exp_cmd->add_option("expression", exp_path)->required();
  exp_cmd->add_option("--bound", exp_bound, "explosion limit (default 10^6)");
  exp_cmd->add_option("-o,--output", exp_out, "write the expansion (.isq)");

  // ---- validate ----
  std::string val_program, val_family;
  CLI::App* val_cmd = app.add_subcommand("validate", "statically check a program");
  val_cmd->add_option("program", val_program)->required();
  val_cmd->add_option("family", val_family)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (run_cmd->parsed()) {
    return guarded([&] {
      FamilyFile fam_file = family_from_json(read_json_file(family_path));
      ServiceFamily fam = make_family(fam_file.spec, fam_file.init);

      ModeOptions opts;
      opts.cfg.fuel = fuel;
      opts.cfg.simulation_mode = simulate;
      opts.cfg.cotarget_reorder = reorder;
      opts.cfg.cycle_detection = cycle_detect;
      opts.cfg.paging_mode =
          paging == "code_controlled" ? PagingMode::CodeControlled : PagingMode::Hardware;
      if (mode == "fragment") {
        opts.jit_window = window;
      } else if (window > 0) {
        opts.cfg.loaded_window = static_cast<std::uint32_t>(window);
      }
      if (!layout_path.empty()) opts.layout_path = layout_path;
      if (!interpreter_path.empty()) opts.interpreter_path = interpreter_path;
      opts.certify = !no_certify;

      const std::string text = read_text_file(program_path);
      InstructionSequence seq;
      InseqexPtr expr;
      if (mode == "fragment") {
        expr = parse_inseqex(text);
      } else {
        seq = parse_program(text);
      }

      TraceSink sink;
      sink.subject_path =
          trace_path.empty() ? default_trace_path(program_path) : trace_path;
      if (!store_dir.empty()) sink.store_dir = store_dir;

      Run subject = run_mode(mode, seq, expr, fam, opts, &sink);
      sink.write_subject(subject);
      print_status(subject);
      for (const std::string& path : sink.written) {
        std::cout << "wrote " << path << "\n";
      }
      return subject.status.is_fault() ? 1 : 0;
    });
  }

  if (cmp_cmd->parsed()) {
    return guarded([&] {
      if (cmp_modes.size() < 2) {
        std::cerr << "error: compare needs at least two modes\n";
        return 2;
      }
      FamilyFile fam_file = family_from_json(read_json_file(cmp_family));
      ServiceFamily fam = make_family(fam_file.spec, fam_file.init);
      const std::string text = read_text_file(cmp_program);

      ModeOptions opts;
      opts.cfg.fuel = cmp_fuel;
      if (!cmp_layout.empty()) opts.layout_path = cmp_layout;
      if (!cmp_interpreter.empty()) opts.interpreter_path = cmp_interpreter;
      opts.jit_window = cmp_window ? cmp_window : 16;

      std::vector<Run> runs;
      for (const std::string& m : cmp_modes) {
        InstructionSequence seq;
        InseqexPtr expr;
        if (m == "fragment") {
          expr = parse_inseqex(text);
        } else {
          seq = parse_program(text);
        }
        runs.push_back(run_mode(m, seq, expr, fam, opts, nullptr));
        std::cout << m << ": ";
        print_status(runs.back());
      }
      for (std::size_t i = 0; i < runs.size(); ++i) {
        for (std::size_t j = i + 1; j < runs.size(); ++j) {
          if (!target_equivalent(runs[i], runs[j])) {
            print_projection_diff(cmp_modes[i], runs[i], cmp_modes[j], runs[j]);
            return 1;
          }
        }
      }
      std::cout << "all modes target-equivalent\n";
      return 0;
    });
  }

  if (cls_cmd->parsed()) {
    return guarded([&] {
      Run run = run_from_json(read_json_file(cls_trace));
      ProvenanceStore store;
      for (const auto& entry : fs::directory_iterator(cls_store)) {
        if (entry.path().extension() != ".json") continue;
        try {
          store.add(run_from_json(read_json_file(entry.path().string())));
        } catch (const std::exception&) {
          // unrelated json files in the store directory are skipped
        }
      }
      store.add(run);

      Classification cls = classify(run, store);
      ExecutionalityReport exec = executionality(run);
      WellFoundedReport wf = check_wellfounded(run, store);
      const std::string out_path =
          cls_out.empty() ? trace_stem(cls_trace) + ".report.json" : cls_out;
      write_json_file(out_path, report_to_json(run.run_id, cls, exec, wf));

      auto flag = [](bool b) { return b ? "true" : "false"; };
      std::cout << "pisie=" << flag(cls.is_pisie) << " dpisie=" << flag(cls.is_dpisie)
                << " interpretation=" << flag(cls.is_interpretation)
                << " execution=" << flag(cls.is_execution) << "\n";
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%+.3f", exec.score);
      std::cout << "executionality=" << buf << " wellfounded=" << flag(wf.ok) << "\n";
      std::cout << "wrote " << out_path << "\n";
      return 0;
    });
  }

  if (gen_cmd->parsed()) {
    return guarded([&] {
      FamilyFile fam_file = family_from_json(read_json_file(gen_iface_path));
      EncodingLayout layout =
          layout_from_json(read_json_file(gen_layout_path), fam_file.spec);
      InstructionSequence y = generate_interpreter(fam_file.spec, layout);
      write_text_file(gen_out, render_program(y) + "\n");
      std::cout << "wrote " << gen_out << " (" << y.size() << " instructions)\n";
      return 0;
    });
  }

  if (exp_cmd->parsed()) {
    return guarded([&] {
      InseqexPtr expr = parse_inseqex(read_text_file(exp_path));
      ExpansionOutcome out = expand(expr, exp_bound);
      if (const auto* boom = std::get_if<Explosion>(&out)) {
        std::cout << "explosion: exact size " << boom->lower_bound << " exceeds bound "
                  << boom->bound << "\n";
        return 1;
      }
      const Expanded& ok = std::get<Expanded>(out);
      std::cout << "expanded size: " << ok.size << "\n";
      if (!exp_out.empty()) {
        write_text_file(exp_out, render_program(ok.seq) + "\n");
        std::cout << "wrote " << exp_out << "\n";
      }
      return 0;
    });
  }

  if (val_cmd->parsed()) {
    return guarded([&] {
      FamilyFile fam_file = family_from_json(read_json_file(val_family));
      InstructionSequence seq = parse_program(read_text_file(val_program));
      ValidationReport report = validate(seq, fam_file.spec);
      for (const ValidationIssue& issue : report.issues) {
        std::cout << (issue_is_error(issue.kind) ? "error" : "warning") << " at "
                  << issue.position << ": " << issue_kind_name(issue.kind) << "\n";
      }
      std::cout << (report.ok ? "ok" : "invalid") << "\n";
      return report.ok ? 0 : 1;
    });
  }

  return 2;
}
