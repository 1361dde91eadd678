// Copyright 2026 The g2p-reinforcer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <sstream>

#include "g2p/checkpoint.hpp"
#include "g2p/data.hpp"
#include "g2p/gradcheck.hpp"
#include "g2p/model.hpp"
#include "g2p/ops.hpp"
#include "g2p/train.hpp"

namespace fs = std::filesystem;
using namespace g2p;

namespace {

// Exit codes: 0 ok, 1 usage, 2 data error, 3 numeric failure.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

struct GlobalOpts {
  std::uint64_t seed = 0;
  std::string precision = "f64";
};

void apply_precision(const GlobalOpts& g) {
  if (g.precision == "f64") set_numeric_mode(Precision::F64);
  else if (g.precision == "f32") set_numeric_mode(Precision::F32);
  else throw CLI::ValidationError("--precision must be f32 or f64");
}

std::set<std::string> parse_freeze(const std::string& s) {
  std::set<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.insert(tok);
  return out;
}

std::string samples_to_tsv(const std::vector<Sample>& samples,
                           const Vocabulary& vocab) {
  std::ostringstream os;
  for (const Sample& s : samples) {
    for (const std::string& c : s.chars) os << c;
    os << '\t';
    for (std::size_t i = 0; i < s.phoneme_ids.size(); ++i) {
      if (i) os << ' ';
      os << vocab.phoneme_at(s.phoneme_ids[i]);
    }
    os << '\n';
  }
  return os.str();
}

Sample make_sample_from_text(const std::string& text, const Vocabulary& vocab,
                             const PolyphoneDictionary& dict) {
  Sample s;
  s.chars = utf8_chars(text);
  for (const std::string& c : s.chars) {
    s.char_ids.push_back(vocab.char_id(c));
    s.phoneme_ids.push_back(kUnkId);
    if (dict.is_polyphone(c))
      s.polyphone_positions.push_back(static_cast<int>(s.char_ids.size()) - 1);
  }
  return s;
}

int cmd_lexicon(const std::string& cedict_path, const std::string& out_path) {
  CedictResult res = parse_cedict(read_file(cedict_path));
  write_file(out_path, res.dict.serialize());
  std::cout << "entries kept: " << res.kept_entries
            << "  characters: " << res.dict.size()
            << "  multi-char excluded: " << res.excluded_multi
            << "  malformed skipped: " << res.skipped_lines << "\n";
  return kExitOk;
}

int cmd_stats(const std::string& text_path, const std::string& lexicon_path,
              const std::string& out_path) {
  PolyphoneDictionary dict =
      PolyphoneDictionary::deserialize(read_file(lexicon_path));
  WordLengthStats st = word_length_stats(read_file(text_path), dict);
  std::string csv = st.to_csv();
  if (out_path.empty())
    std::cout << csv;
  else
    write_file(out_path, csv);
  std::cout << "polyphone share: " << st.polyphone_type_pct
            << "% of grapheme types, " << st.polyphone_token_pct
            << "% of character tokens\n";
  return kExitOk;
}

int cmd_synth(int n, std::uint64_t seed, const std::string& out_path,
              std::string lexicon_path) {
  SandhiCorpus sc = gen_sandhi_corpus(n, seed);
  write_file(out_path, sc.corpus_tsv);
  if (lexicon_path.empty()) lexicon_path = out_path + ".lexicon";
  write_file(lexicon_path, sc.lexicon_tsv);
  std::cout << "sentences: " << n << "  polyphone tokens: " << sc.polyphone_tokens
            << "  pointwise Bayes rate: " << sc.pointwise_bayes_pct << "%\n"
            << "corpus: " << out_path << "\nlexicon: " << lexicon_path << "\n";
  return kExitOk;
}

int cmd_split(const std::string& corpus_path, const std::string& lexicon_path,
              const std::string& out_prefix, std::uint64_t seed) {
  PolyphoneDictionary dict =
      PolyphoneDictionary::deserialize(read_file(lexicon_path));
  Vocabulary vocab;
  CorpusLoadResult res = load_corpus_file(corpus_path, vocab, dict, true);
  CorpusSplit split = split_corpus(res.samples, {8, 1, 1}, seed);
  write_file(out_prefix + "train.tsv", samples_to_tsv(split.train, vocab));
  write_file(out_prefix + "val.tsv", samples_to_tsv(split.val, vocab));
  write_file(out_prefix + "test.tsv", samples_to_tsv(split.test, vocab));
  std::cout << "kept " << res.kept << " dropped " << res.dropped_mismatch
            << "  ->  train " << split.train.size() << " / val "
            << split.val.size() << " / test " << split.test.size() << "\n";
  return kExitOk;
}

struct TrainArgs {
  std::string corpus, lexicon, out_dir;
  std::string reinforcer = "none", lm = "identity";
  int layers = 1, dim = 64, epochs = 100, batch = 32;
  int heads = 4, kernel = 3, shift = 1, max_seq_len = 64, eval_every = 10;
  double lr = 1e-4, smoothing = 0.1;
  bool no_positional = false;
  std::string freeze;
  std::vector<std::uint64_t> seeds;
};

int cmd_train(const TrainArgs& a, const GlobalOpts& g) {
  PolyphoneDictionary dict =
      PolyphoneDictionary::deserialize(read_file(a.lexicon));
  Vocabulary vocab;
  CorpusLoadResult res = load_corpus_file(a.corpus, vocab, dict, true);
  std::cout << "corpus: kept " << res.kept << ", dropped "
            << res.dropped_mismatch << " (length mismatch)\n";

  ModelConfig mcfg;
  mcfg.reinforcer = parse_reinforcer_kind(a.reinforcer);
  mcfg.lm = parse_lm_kind(a.lm);
  mcfg.num_layers = a.layers;
  mcfg.embed_dim = a.dim;
  mcfg.num_heads = a.heads;
  mcfg.kernel_size = a.kernel;
  mcfg.shift_size = a.shift;
  mcfg.max_seq_len = a.max_seq_len;
  mcfg.use_positional = !a.no_positional;

  TrainConfig tcfg;
  tcfg.lr = a.lr;
  tcfg.batch_size = a.batch;
  tcfg.label_smoothing = a.smoothing;
  tcfg.epochs = a.epochs;
  tcfg.seed = g.seed;
  tcfg.eval_every = a.eval_every;
  tcfg.frozen_set = parse_freeze(a.freeze);
  tcfg.precision = numeric_mode();

  if (a.seeds.size() >= 2) {
    MultiSeedResult ms =
        multi_seed_run(mcfg, tcfg, res.samples, vocab, dict, a.seeds);
    for (std::size_t i = 0; i < ms.per_seed_accuracy.size(); ++i)
      std::cout << "seed " << a.seeds[i] << ": " << ms.per_seed_accuracy[i]
                << "%\n";
    std::cout << "test polyphone accuracy: " << ms.formatted << "\n";
    return kExitOk;
  }

  CorpusSplit split = split_corpus(res.samples, {8, 1, 1}, g.seed);
  Model model(mcfg, vocab, dict, g.seed);
  std::cout << "parameters: " << model.param_count() << "\n";
  RunReport report = train(model, split.train, split.val, tcfg);
  double acc_restrict = evaluate(model, split.test, true);
  double acc_free = evaluate(model, split.test, false);
  report.test_accuracy = acc_restrict;
  std::cout << "train accuracy: " << report.final_train_accuracy << "%\n"
            << "test accuracy (candidate-restricted): " << acc_restrict
            << "%\ntest accuracy (unrestricted): " << acc_free << "%\n";
  if (!a.out_dir.empty()) {
    save_checkpoint(model, a.out_dir);
    write_file((fs::path(a.out_dir) / "report.json").string(),
               report.to_json() + "\n");
    std::cout << "checkpoint: " << a.out_dir << "\n";
  }
  return kExitOk;
}

int cmd_eval(const std::string& ckpt, const std::string& corpus_path,
             bool no_restrict) {
  Model model = load_checkpoint(ckpt);
  Vocabulary vocab = model.vocab();
  CorpusLoadResult res =
      load_corpus_file(corpus_path, vocab, model.dictionary(), false);
  double acc = evaluate(model, res.samples, !no_restrict);
  std::cout << "polyphone accuracy"
            << (no_restrict ? " (unrestricted): " : " (candidate-restricted): ")
            << acc << "%\n";
  return kExitOk;
}

int cmd_convert(const std::string& ckpt, const std::string& text) {
  if (text.empty()) {
    std::cout << "\n";
    return kExitOk;
  }
  Model model = load_checkpoint(ckpt);
  const PolyphoneDictionary& dict = model.dictionary();
  Sample s = make_sample_from_text(text, model.vocab(), dict);
  std::vector<int> preds;
  if (!s.polyphone_positions.empty()) preds = model.predict(s, true);
  std::size_t next_poly = 0;
  std::ostringstream os;
  for (std::size_t i = 0; i < s.chars.size(); ++i) {
    if (i) os << ' ';
    const std::string& c = s.chars[i];
    if (next_poly < s.polyphone_positions.size() &&
        s.polyphone_positions[next_poly] == static_cast<int>(i)) {
      os << model.vocab().phoneme_at(preds[next_poly]);
      ++next_poly;
    } else if (dict.contains(c)) {
      os << dict.candidates(c)[0];
    } else {
      os << "?";
    }
  }
  std::cout << os.str() << "\n";
  return kExitOk;
}

int cmd_gradcheck(const std::string& reinforcer, const std::string& lm,
                  int dim, int t, std::uint64_t seed) {
  Vocabulary vocab;
  PolyphoneDictionary dict;
  for (int i = 0; i < 6; ++i) {
    std::string c = "c" + std::to_string(i);
    vocab.add_char(c);
    vocab.add_phoneme("p" + std::to_string(i) + "1");
    dict.add(c, "p" + std::to_string(i) + "1");
  }
  ModelConfig cfg;
  cfg.reinforcer = parse_reinforcer_kind(reinforcer);
  cfg.lm = parse_lm_kind(lm);
  cfg.embed_dim = dim;
  cfg.num_layers = 1;
  cfg.num_heads = 2;
  cfg.max_seq_len = t;
  Model model(cfg, vocab, dict, seed);

  std::mt19937_64 rng(seed + 1);
  Sample s;
  for (int i = 0; i < t; ++i) {
    int cid = 2 + static_cast<int>(rng() % 6);
    s.char_ids.push_back(cid);
    s.chars.push_back(vocab.char_at(cid));
    s.phoneme_ids.push_back(2 + static_cast<int>(rng() % 6));
  }
  s.polyphone_positions = {0, t / 2};

  auto loss_fn = [&] {
    PipelineOutput out = model.forward(s);
    std::vector<int> targets;
    for (int p : s.polyphone_positions)
      targets.push_back(s.phoneme_ids[static_cast<std::size_t>(p)]);
    return cross_entropy_label_smoothed(*out.logits, targets, 0.1);
  };
  double err = grad_check(loss_fn, model.param_tensors(), 1e-5);
  std::cout << "reinforcer=" << reinforcer << " lm=" << lm
            << "  max relative error: " << err << "\n";
  if (err >= 1e-4) {
    std::cerr << "gradient check FAILED (threshold 1e-4)\n";
    return kExitNumeric;
  }
  std::cout << "gradient check passed\n";
  return kExitOk;
}

int cmd_attn(const std::string& ckpt, const std::string& text, int position,
             const std::string& out_path) {
  Model model = load_checkpoint(ckpt);
  Sample s = make_sample_from_text(text, model.vocab(), model.dictionary());
  AttentionExport e = export_attention(model, s, position);
  std::string csv = attention_to_csv(e);
  if (out_path.empty())
    std::cout << csv;
  else
    write_file(out_path, csv);
  return kExitOk;
}

int cmd_casestudy(const std::string& ckpt_a, const std::string& ckpt_b,
                  const std::string& corpus_path) {
  Model a = load_checkpoint(ckpt_a);
  Model b = load_checkpoint(ckpt_b);
  Vocabulary vocab = a.vocab();
  CorpusLoadResult res =
      load_corpus_file(corpus_path, vocab, a.dictionary(), false);
  std::vector<CaseStudyEntry> entries = case_study_dump(a, b, res.samples);
  std::cout << "sentence\tposition\tgold\tmodel_a\tmodel_b\n";
  for (const CaseStudyEntry& e : entries)
    std::cout << e.sentence << '\t' << e.position << '\t' << e.gold << '\t'
              << e.pred_a << '\t' << e.pred_b << '\n';
  std::cout << "# " << entries.size() << " disagreement(s)\n";
  return kExitOk;
}

int cmd_convert_databaker(const std::string& in_path,
                          const std::string& out_path) {
  DatabakerResult res = convert_databaker(read_file(in_path));
  write_file(out_path, res.corpus_tsv);
  std::cout << "converted " << res.converted << ", failed " << res.failed
            << "\n";
  for (const std::string& f : res.failures) std::cerr << "  " << f << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chinese grapheme-to-phoneme pipeline with neighborhood "
               "reinforcement (conv / shift-and-stack)"};
  app.require_subcommand(1);
  app.set_config("--config")->configurable(false);

  GlobalOpts g;
  app.add_option("--seed", g.seed, "Global RNG seed")->capture_default_str();
  app.add_option("--precision", g.precision, "Numeric mode: f32 or f64")
      ->check(CLI::IsMember({"f32", "f64"}))
      ->capture_default_str();

  // lexicon
  auto* lex = app.add_subcommand("lexicon", "Parse a CC-CEDICT file into a lexicon");
  std::string lex_cedict, lex_out;
  lex->add_option("--cedict", lex_cedict, "CC-CEDICT input file")->required();
  lex->add_option("--out", lex_out, "Output lexicon path")->required();

  // stats
  auto* stats = app.add_subcommand("stats", "Word-length statistics over pre-segmented text");
  std::string stats_text, stats_lexicon, stats_out;
  stats->add_option("--text", stats_text, "Whitespace-pre-segmented text file")->required();
  stats->add_option("--lexicon", stats_lexicon, "Lexicon file")->required();
  stats->add_option("--out", stats_out, "CSV output path (default stdout)");

  // synth
  auto* synth = app.add_subcommand("synth", "Generate the synthetic tone-sandhi corpus");
  int synth_n = 64;
  std::string synth_out, synth_lexicon;
  synth->add_option("--n", synth_n, "Number of sentences")->required();
  synth->add_option("--out", synth_out, "Corpus output path")->required();
  synth->add_option("--lexicon", synth_lexicon, "Lexicon output path (default <out>.lexicon)");

  // split
  auto* split = app.add_subcommand("split", "Deterministic 8:1:1 corpus split");
  std::string split_corpus_path, split_lexicon, split_prefix;
  split->add_option("--corpus", split_corpus_path, "Corpus TSV")->required();
  split->add_option("--lexicon", split_lexicon, "Lexicon file")->required();
  split->add_option("--out-prefix", split_prefix, "Output prefix")->required();

  // train
  auto* tr = app.add_subcommand("train", "Train a model");
  TrainArgs ta;
  tr->add_option("--corpus", ta.corpus, "Corpus TSV")->required();
  tr->add_option("--lexicon", ta.lexicon, "Lexicon file")->required();
  tr->add_option("--out", ta.out_dir, "Checkpoint output directory");
  tr->add_option("--reinforcer", ta.reinforcer, "none | conv | sso")
      ->check(CLI::IsMember({"none", "conv", "sso"}))->capture_default_str();
  tr->add_option("--lm", ta.lm, "identity | transformer | mixer")
      ->check(CLI::IsMember({"identity", "transformer", "mixer"}))
      ->capture_default_str();
  tr->add_option("--layers", ta.layers)->capture_default_str();
  tr->add_option("--dim", ta.dim, "Embedding size")->capture_default_str();
  tr->add_option("--epochs", ta.epochs)->capture_default_str();
  tr->add_option("--batch", ta.batch)->capture_default_str();
  tr->add_option("--lr", ta.lr)->capture_default_str();
  tr->add_option("--smoothing", ta.smoothing, "Label smoothing")->capture_default_str();
  tr->add_option("--heads", ta.heads)->capture_default_str();
  tr->add_option("--kernel", ta.kernel, "Conv kernel size")->capture_default_str();
  tr->add_option("--shift", ta.shift, "SSO shift size")->capture_default_str();
  tr->add_option("--max-seq-len", ta.max_seq_len)->capture_default_str();
  tr->add_option("--eval-every", ta.eval_every)->capture_default_str();
  tr->add_flag("--no-positional", ta.no_positional, "Disable learned positions");
  tr->add_option("--freeze", ta.freeze, "Comma list of {lm,embedding,reinforcer,classifier}");
  tr->add_option("--seeds", ta.seeds, "Multi-seed protocol: re-split/train per seed");

  // eval
  auto* ev = app.add_subcommand("eval", "Evaluate a checkpoint");
  std::string ev_ckpt, ev_corpus;
  bool ev_no_restrict = false;
  ev->add_option("--ckpt", ev_ckpt, "Checkpoint directory")->required();
  ev->add_option("--corpus", ev_corpus, "Corpus TSV")->required();
  ev->add_flag("--no-restrict", ev_no_restrict, "Disable candidate restriction");

  // convert
  auto* cv = app.add_subcommand("convert", "Convert text to pinyin");
  std::string cv_ckpt, cv_text;
  cv->add_option("--ckpt", cv_ckpt, "Checkpoint directory")->required();
  cv->add_option("--text", cv_text, "Input sentence")->required();

  // gradcheck
  auto* gc = app.add_subcommand("gradcheck", "Finite-difference gradient check");
  std::string gc_reinforcer = "sso", gc_lm = "mixer";
  int gc_dim = 8, gc_t = 5;
  gc->add_option("--reinforcer", gc_reinforcer)
      ->check(CLI::IsMember({"none", "conv", "sso"}))->capture_default_str();
  gc->add_option("--lm", gc_lm)
      ->check(CLI::IsMember({"identity", "transformer", "mixer"}))
      ->capture_default_str();
  gc->add_option("--dim", gc_dim)->capture_default_str();
  gc->add_option("--t", gc_t, "Sequence length")->capture_default_str();

  // attn
  auto* at = app.add_subcommand("attn", "Export averaged attention weights");
  std::string at_ckpt, at_text, at_out;
  int at_pos = 0;
  at->add_option("--ckpt", at_ckpt, "Checkpoint directory")->required();
  at->add_option("--text", at_text, "Input sentence")->required();
  at->add_option("--position", at_pos, "Target polyphone position")->required();
  at->add_option("--out", at_out, "CSV output path (default stdout)");

  // casestudy
  auto* cs = app.add_subcommand("casestudy", "Prediction disagreements between two checkpoints");
  std::string cs_a, cs_b, cs_corpus;
  cs->add_option("--ckpt-a", cs_a)->required();
  cs->add_option("--ckpt-b", cs_b)->required();
  cs->add_option("--corpus", cs_corpus)->required();

  // convert-databaker
  auto* db = app.add_subcommand("convert-databaker", "Convert a DataBaker transcript to corpus TSV");
  std::string db_in, db_out;
  db->add_option("--in", db_in, "DataBaker transcript file")->required();
  db->add_option("--out", db_out, "Corpus TSV output")->required();

  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    apply_precision(g);
    if (*lex) return cmd_lexicon(lex_cedict, lex_out);
    if (*stats) return cmd_stats(stats_text, stats_lexicon, stats_out);
    if (*synth) return cmd_synth(synth_n, g.seed, synth_out, synth_lexicon);
    if (*split) return cmd_split(split_corpus_path, split_lexicon, split_prefix, g.seed);
    if (*tr) return cmd_train(ta, g);
    if (*ev) return cmd_eval(ev_ckpt, ev_corpus, ev_no_restrict);
    if (*cv) return cmd_convert(cv_ckpt, cv_text);
    if (*gc) return cmd_gradcheck(gc_reinforcer, gc_lm, gc_dim, gc_t, g.seed);
    if (*at) return cmd_attn(at_ckpt, at_text, at_pos, at_out);
    if (*cs) return cmd_casestudy(cs_a, cs_b, cs_corpus);
    if (*db) return cmd_convert_databaker(db_in, db_out);
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
