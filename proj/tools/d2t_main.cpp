// d2t: command-line front end for the data-to-text pipeline.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "d2t/pipeline.hpp"

namespace {

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  bool strict = false;
  bool serial = false;
  std::optional<std::size_t> beam;
  std::optional<double> alpha;
  std::optional<std::size_t> max_tokens;
  std::optional<std::string> slot_order;
  bool no_rerank = false;
  std::optional<std::string> registry, vocab, lm, sfc, realization_table;
  std::optional<std::size_t> vocab_size, order, epochs, repeat;
  std::optional<double> smoothing, learning_rate;
  std::string input = "-";
  std::string output = "-";
  std::string hyp, ref;
  bool token_basis = false;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON config file (default: $D2T_CONFIG)");
  cmd->add_option("--seed", f.seed, "random seed");
  cmd->add_flag("--strict", f.strict, "fail when any record fails");
  cmd->add_flag("--serial", f.serial, "disable OpenMP record parallelism");
}

void add_io(CLI::App* cmd, Flags& f, bool with_output = true) {
  cmd->add_option("-i,--input", f.input, "input JSONL ('-' for stdin)");
  if (with_output) cmd->add_option("-o,--output", f.output, "output file ('-' for stdout)");
}

void add_models(CLI::App* cmd, Flags& f) {
  cmd->add_option("--registry", f.registry, "special-token registry file");
  cmd->add_option("--vocab", f.vocab, "BPE vocabulary file");
}

d2t::PipelineConfig build_config(const Flags& f) {
  d2t::PipelineConfig cfg;
  std::string config_path = f.config;
  if (config_path.empty()) {
    if (const char* env = std::getenv("D2T_CONFIG")) config_path = env;
  }
  if (!config_path.empty()) cfg = d2t::load_config(config_path, cfg);
  if (f.seed) cfg.seed = f.seed;
  if (f.strict) cfg.strict = true;
  if (f.serial) cfg.parallel = false;
  if (f.beam) cfg.decode.beam_width = *f.beam;
  if (f.alpha) cfg.decode.alpha = *f.alpha;
  if (f.max_tokens) cfg.decode.max_text_tokens = *f.max_tokens;
  if (f.slot_order) cfg.slot_order = d2t::parse_slot_order(*f.slot_order);
  if (f.no_rerank) cfg.rerank = false;
  if (f.registry) cfg.registry = *f.registry;
  if (f.vocab) cfg.vocab = *f.vocab;
  if (f.lm) cfg.lm = *f.lm;
  if (f.sfc) cfg.sfc = *f.sfc;
  if (f.realization_table) cfg.realization_table = *f.realization_table;
  if (f.vocab_size) cfg.vocab_size = *f.vocab_size;
  if (f.order) cfg.ngram.order = *f.order;
  if (f.smoothing) cfg.ngram.smoothing = *f.smoothing;
  if (f.epochs) cfg.classifier.epochs = *f.epochs;
  if (f.learning_rate) cfg.classifier.learning_rate = *f.learning_rate;
  if (f.repeat) cfg.repeat_count = *f.repeat;
  return cfg;
}

class Streams {
 public:
  Streams(const std::string& in, const std::string& out) {
    if (in != "-") {
      file_in_ = std::make_unique<std::ifstream>(in, std::ios::binary);
      if (!*file_in_) throw d2t::Error(d2t::ErrorCode::IoFailure, "cannot read " + in);
    }
    if (out != "-") {
      file_out_ = std::make_unique<std::ofstream>(out, std::ios::binary);
      if (!*file_out_) throw d2t::Error(d2t::ErrorCode::IoFailure, "cannot write " + out);
    }
  }
  std::istream& in() { return file_in_ ? *file_in_ : std::cin; }
  std::ostream& out() { return file_out_ ? *file_out_ : std::cout; }

 private:
  std::unique_ptr<std::ifstream> file_in_;
  std::unique_ptr<std::ofstream> file_out_;
};

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw d2t::Error(d2t::ErrorCode::IoFailure, "cannot read " + path);
  return in;
}

void summarize(const char* cmd, const d2t::CommandReport& r) {
  std::cerr << cmd << ": " << r.records << " record(s), " << r.written << " written, " << r.failed_ids.size()
            << " failed\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Data-to-text pipeline: linearize, corrupt, train, generate, evaluate, stats"};
  app.require_subcommand(1);
  Flags f;

  auto* lin = app.add_subcommand("linearize", "add data_linearized to each record");
  add_common(lin, f);
  add_io(lin, f);
  lin->add_option("--registry", f.registry, "registry file (tokens are registered on the fly if absent)");
  lin->add_option("--slot-order", f.slot_order, "source | name-first-alphabetical");

  auto* cor = app.add_subcommand("corrupt", "generate the fidelity-classifier training corpus");
  add_common(cor, f);
  add_io(cor, f);
  cor->add_option("--repeat", f.repeat, "rounds of repetition/hallucination/value-error draws");
  cor->add_option("--slot-order", f.slot_order, "source | name-first-alphabetical");

  auto* train = app.add_subcommand("train", "train a model");
  train->require_subcommand(1);
  auto* tbpe = train->add_subcommand("bpe", "build the registry and BPE vocabulary");
  add_common(tbpe, f);
  add_io(tbpe, f, false);
  add_models(tbpe, f);
  tbpe->add_option("--vocab-size", f.vocab_size, "target vocabulary size");
  tbpe->add_option("--slot-order", f.slot_order, "source | name-first-alphabetical");
  auto* tlm = train->add_subcommand("lm", "train the n-gram language model");
  add_common(tlm, f);
  add_io(tlm, f, false);
  add_models(tlm, f);
  tlm->add_option("--lm", f.lm, "output model file");
  tlm->add_option("--order", f.order, "n-gram order");
  tlm->add_option("--smoothing", f.smoothing, "additive smoothing constant");
  tlm->add_option("--slot-order", f.slot_order, "source | name-first-alphabetical");
  auto* tsfc = train->add_subcommand("sfc", "train the fidelity classifier on corrupt output");
  add_common(tsfc, f);
  add_io(tsfc, f, false);
  tsfc->add_option("--sfc", f.sfc, "output model file");
  tsfc->add_option("--epochs", f.epochs, "gradient descent epochs");
  tsfc->add_option("--lr", f.learning_rate, "learning rate");

  auto* gen = app.add_subcommand("generate", "generate texts for records");
  add_common(gen, f);
  add_io(gen, f);
  add_models(gen, f);
  gen->add_option("--lm", f.lm, "language model file");
  gen->add_option("--sfc", f.sfc, "fidelity classifier file (optional)");
  gen->add_option("--beam", f.beam, "beam width");
  gen->add_option("--alpha", f.alpha, "length normalization exponent");
  gen->add_option("--max-tokens", f.max_tokens, "cap on generated text tokens");
  gen->add_option("--slot-order", f.slot_order, "source | name-first-alphabetical");
  gen->add_flag("--no-rerank", f.no_rerank, "keep beam order");

  auto* ev = app.add_subcommand("evaluate", "score hypotheses against references");
  add_common(ev, f);
  ev->add_option("--hyp", f.hyp, "generate output (id, text)")->required();
  ev->add_option("--ref", f.ref, "reference corpus records")->required();
  ev->add_option("-o,--output", f.output, "JSON report file ('-' for stdout)");
  ev->add_option("--sfc", f.sfc, "classifier for DSA");
  ev->add_option("--registry", f.registry, "registry used to linearize data for DSA");
  ev->add_option("--realization-table", f.realization_table, "SER value variants (TSV)");
  ev->add_option("--slot-order", f.slot_order, "source | name-first-alphabetical");

  auto* st = app.add_subcommand("stats", "unique words, % capitalized and Dale-Chall of a corpus");
  add_common(st, f);
  add_io(st, f);
  st->add_flag("--token-basis", f.token_basis, "count capitalization over tokens instead of unique words");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    const d2t::PipelineConfig cfg = build_config(f);
    if (lin->parsed()) {
      Streams io(f.input, f.output);
      summarize("linearize", d2t::cmd_linearize(io.in(), io.out(), std::cerr, cfg));
    } else if (cor->parsed()) {
      Streams io(f.input, f.output);
      summarize("corrupt", d2t::cmd_corrupt(io.in(), io.out(), std::cerr, cfg));
    } else if (tbpe->parsed()) {
      Streams io(f.input, "-");
      d2t::cmd_train_bpe(io.in(), std::cerr, cfg);
    } else if (tlm->parsed()) {
      Streams io(f.input, "-");
      d2t::cmd_train_lm(io.in(), std::cerr, cfg);
    } else if (tsfc->parsed()) {
      Streams io(f.input, "-");
      d2t::cmd_train_sfc(io.in(), std::cerr, cfg);
    } else if (gen->parsed()) {
      Streams io(f.input, f.output);
      summarize("generate", d2t::cmd_generate(io.in(), io.out(), std::cerr, cfg));
    } else if (ev->parsed()) {
      auto hyps = open_in(f.hyp);
      auto refs = open_in(f.ref);
      const auto report = d2t::cmd_evaluate(hyps, refs, cfg);
      Streams io("-", f.output);
      io.out() << report.to_json() << "\n";
      std::cerr << report.to_table();
    } else if (st->parsed()) {
      Streams io(f.input, f.output);
      const auto report = d2t::cmd_stats(io.in(), f.token_basis ? d2t::CapitalBasis::Tokens
                                                                : d2t::CapitalBasis::UniqueWords);
      io.out() << report.to_json() << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "d2t: " << e.what() << "\n";
    return d2t::exit_code_for(e);
  }
  return 0;
}
