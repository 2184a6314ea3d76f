#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "aifv/codec.hpp"
#include "aifv/solvers.hpp"

namespace fs = std::filesystem;
using namespace aifv;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file: " + path);
  out << data;
}

Method parse_method(const std::string& name) {
  if (auto m = method_from_string(name)) return *m;
  throw CLI::ValidationError("--method", "must be one of binary-search, ellipsoid, "
                                         "iterative, exhaustive");
}

EllipsoidOptions ellipsoid_options_from_env() {
  EllipsoidOptions opts;
  if (const char* env = std::getenv("AIFV2_PRECISION")) {
    try {
      opts.precision_bits = std::stol(env);
    } catch (const std::exception&) {
      throw Error("AIFV2_PRECISION must be an integer bit count");
    }
  }
  return opts;
}

SolveReport run_solver(const SourceDist& dist, Method method) {
  if (method == Method::Ellipsoid) return solve_ellipsoid(dist, ellipsoid_options_from_env());
  return solve(dist, method);
}

void warn_reduced(const CodeTree& tree, const std::string& name) {
  for (const Violation& v : tree.validate())
    if (is_reduced_rule(v.rule))
      std::cerr << "warning: " << name << ": " << to_string(v.rule) << " (node "
                << v.node << "): " << v.detail << "\n";
}

CodeTree load_tree(const std::string& path) {
  CodeTree tree = CodeTree::deserialize(read_file(path));
  const auto violations = tree.validate();
  for (const Violation& v : violations)
    if (!is_reduced_rule(v.rule))
      throw Error(path + ": " + to_string(v.rule) + " (node " + std::to_string(v.node) +
                  "): " + v.detail);
  warn_reduced(tree, path);
  return tree;
}

std::string perm_file_text(const SourceDist& dist) {
  std::ostringstream os;
  os << "symbols " << dist.n() << "\n";
  for (std::size_t i = 0; i < dist.n(); ++i) os << i << " " << dist.perm()[i] << "\n";
  return os.str();
}

// sorted index -> original label; identity when the file is absent.
std::vector<int> load_perm(const std::string& dir, int n) {
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  const fs::path path = fs::path(dir) / "symbols.txt";
  if (!fs::exists(path)) return perm;
  std::istringstream in(read_file(path.string()));
  std::string magic;
  int count = 0;
  if (!(in >> magic >> count) || magic != "symbols" || count != n)
    throw Error(path.string() + ": bad symbols header");
  for (int i = 0; i < n; ++i) {
    int sorted = 0, original = 0;
    if (!(in >> sorted >> original) || sorted != i)
      throw Error(path.string() + ": bad symbols row " + std::to_string(i));
    perm[i] = original;
  }
  return perm;
}

CodePair load_pair(const std::string& dir) {
  return CodePair(load_tree((fs::path(dir) / "t0.tree").string()),
                  load_tree((fs::path(dir) / "t1.tree").string()));
}

int cmd_solve(const std::string& input, const std::string& method_name,
              const std::string& output) {
  const SourceDist dist = load_dist_file(input);
  const SolveReport report = run_solver(dist, parse_method(method_name));
  const std::string text = render_report(report, dist);
  std::cout << text;
  if (!output.empty()) {
    fs::create_directories(output);
    write_file((fs::path(output) / "report.txt").string(), text);
    write_file((fs::path(output) / "t0.tree").string(), report.pair.t0.serialize());
    write_file((fs::path(output) / "t1.tree").string(), report.pair.t1.serialize());
    write_file((fs::path(output) / "symbols.txt").string(), perm_file_text(dist));
  }
  return 0;
}

int cmd_encode(const std::string& trees_dir, const std::string& input,
               const std::string& output) {
  const CodePair pair = load_pair(trees_dir);
  const std::vector<int> perm = load_perm(trees_dir, pair.n());
  std::vector<int> inverse(perm.size(), -1);
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (perm[i] < 0 || perm[i] >= static_cast<int>(perm.size()))
      throw Error("symbols.txt: label out of range");
    if (inverse[perm[i]] != -1)
      throw Error("symbols.txt: label " + std::to_string(perm[i]) + " appears twice");
    inverse[perm[i]] = static_cast<int>(i);
  }

  std::istringstream in(read_file(input));
  std::vector<int> message;
  std::string tok;
  while (in >> tok) {
    int label = 0;
    try {
      label = std::stoi(tok);
    } catch (const std::exception&) {
      throw Error("message token '" + tok + "' is not a symbol index");
    }
    if (label < 0 || label >= pair.n())
      throw Error("message symbol " + tok + " out of range 0.." +
                  std::to_string(pair.n() - 1));
    message.push_back(inverse[label]);
  }
  const BitStream bits = encode(message, pair);
  write_file(output, write_container(bits, pair.n(), message.size()));
  return 0;
}

int cmd_decode(const std::string& trees_dir, const std::string& input,
               const std::string& output) {
  const CodePair pair = load_pair(trees_dir);
  const std::vector<int> perm = load_perm(trees_dir, pair.n());
  const Container c = read_container(read_file(input));
  if (c.n != pair.n()) throw Error("container n does not match the code trees");
  const std::vector<int> message = decode(c.stream, c.count, pair);
  std::ostringstream os;
  for (std::size_t i = 0; i < message.size(); ++i) {
    if (i) os << " ";
    os << perm[message[i]];
  }
  os << "\n";
  if (output.empty())
    std::cout << os.str();
  else
    write_file(output, os.str());
  return 0;
}

int cmd_compare(const std::string& input, const std::string& method_name) {
  const SourceDist dist = load_dist_file(input);
  const SolveReport report = run_solver(dist, parse_method(method_name));
  const HuffmanResult huff = huffman(dist);
  const double h = entropy(dist);
  const double cost = report.cost.to_double();
  std::cout << "n: " << dist.n() << "\n";
  std::cout << "b: " << dist.b() << "\n";
  std::cout << "entropy_bits: " << h << "\n";
  std::cout << "aifv2_cost: " << report.cost.str() << " (" << cost << ")\n";
  std::cout << "huffman_cost: " << huff.cost.str() << " (" << huff.cost.to_double() << ")\n";
  std::cout << "redundancy_bits: " << cost - h << "\n";
  std::cout << "improvement_over_huffman: " << (huff.cost - report.cost).str() << " ("
            << (huff.cost - report.cost).to_double() << ")\n";
  const bool ordered = !(report.cost < Rational(0)) && cost + 1e-9 >= h &&
                       !(huff.cost < report.cost);
  std::cout << "ordering_h_le_cost_le_huffman: " << (ordered ? "true" : "false") << "\n";
  return 0;
}

int cmd_envelope(const std::string& input, long samples) {
  if (samples < 2) throw Error("--samples must be at least 2");
  const SourceDist dist = load_dist_file(input);
  std::cout << "x\tE0\tE1\tM\n";
  for (long k = 0; k < samples; ++k) {
    const Rational x = Rational(k, samples - 1);
    const EnvelopePoint env = envelope_at(x, dist);
    const Rational m = min(env.e0, env.e1);
    std::cout << x.str() << "\t" << env.e0.str() << "\t" << env.e1.str() << "\t"
              << m.str() << "\n";
  }
  return 0;
}

void dyadic_grid(int n, long b, std::vector<std::vector<Rational>>& out) {
  const long total = 1L << b;
  std::vector<long> parts;
  // Non-increasing positive parts summing to 2^b.
  auto rec = [&](auto&& self, long remaining, long cap, int left) -> void {
    if (left == 1) {
      if (remaining >= 1 && remaining <= cap) {
        std::vector<Rational> dist;
        for (long c : parts) dist.emplace_back(Rational(c) * Rational::pow2(-b));
        dist.emplace_back(Rational(remaining) * Rational::pow2(-b));
        out.push_back(std::move(dist));
      }
      return;
    }
    for (long c = std::min(cap, remaining - (left - 1)); c >= 1; --c) {
      if (c * left < remaining) break;  // even c everywhere cannot reach the sum
      parts.push_back(c);
      self(self, remaining - c, c, left - 1);
      parts.pop_back();
    }
  };
  rec(rec, total, total, n);
}

std::vector<Rational> random_dyadic(int n, long b, std::mt19937_64& rng) {
  const long total = 1L << b;
  if (total < n) throw Error("need 2^bits >= n to fit " + std::to_string(n) +
                             " positive probabilities");
  // n-1 distinct cut points make n positive parts.
  std::vector<long> cuts;
  while (static_cast<int>(cuts.size()) < n - 1) {
    long c = static_cast<long>(rng() % static_cast<unsigned long>(total - 1)) + 1;
    if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
  }
  cuts.push_back(0);
  cuts.push_back(total);
  std::sort(cuts.begin(), cuts.end());
  std::vector<Rational> dist;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    dist.emplace_back(Rational(cuts[i + 1] - cuts[i]) * Rational::pow2(-b));
  return dist;
}

int cmd_sweep(int max_n, long bits, const std::string& method_name, long samples,
              std::uint64_t seed) {
  const Method method = parse_method(method_name);
  if (max_n < 2 || max_n > kMaxEnumerationSymbols)
    throw Error("--max-n must be in 2.." + std::to_string(kMaxEnumerationSymbols));
  if (bits < 1 || bits > 8)
    throw Error("--bits must be in 1..8 (the grid grows as 2^bits^(n-1))");
  std::vector<std::vector<Rational>> grid;
  for (int n = 2; n <= max_n; ++n) dyadic_grid(n, bits, grid);
  std::mt19937_64 rng(seed);
  const int random_max_n = static_cast<int>(std::min<long>(max_n, 1L << bits));
  for (long i = 0; i < samples && random_max_n >= 2; ++i) {
    const int n =
        2 + static_cast<int>(rng() % static_cast<unsigned long>(random_max_n - 1));
    grid.push_back(random_dyadic(n, bits, rng));
  }

  std::cout << "n\tb\tdist\tentropy\thuffman\taifv2\tredundancy\timproved\n";
  std::size_t improved_count = 0;
  double max_redundancy = 0;
  for (const auto& values : grid) {
    const SourceDist dist = make_dist(values);
    const SolveReport report = run_solver(dist, method);
    const HuffmanResult huff = huffman(dist);
    const double h = entropy(dist);
    const bool improved = report.cost < huff.cost;
    improved_count += improved;
    max_redundancy = std::max(max_redundancy, report.cost.to_double() - h);
    std::cout << dist.n() << "\t" << dist.b() << "\t";
    for (std::size_t i = 0; i < dist.n(); ++i)
      std::cout << (i ? "," : "") << dist.p(i).str();
    std::cout << "\t" << h << "\t" << huff.cost.str() << "\t" << report.cost.str()
              << "\t" << report.cost.to_double() - h << "\t"
              << (improved ? "yes" : "no") << "\n";
  }
  std::cout << "# instances: " << grid.size() << "\n";
  std::cout << "# improved_over_huffman: " << improved_count << "\n";
  std::cout << "# max_redundancy_bits: " << max_redundancy << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal binary AIFV-2 code construction and coding"};
  app.require_subcommand(1);

  std::string input, output, trees_dir;
  std::string method = "binary-search";
  long samples = 256;
  int max_n = 5;
  long bits = 4;
  std::uint64_t seed = 1;
  long sweep_samples = 0;

  auto* solve_cmd = app.add_subcommand("solve", "construct an optimal code pair");
  solve_cmd->add_option("-i,--input", input, "distribution file")->required();
  solve_cmd->add_option("--method", method, "binary-search|ellipsoid|iterative|exhaustive");
  solve_cmd->add_option("-o,--output", output, "directory for report + tree files");

  auto* encode_cmd = app.add_subcommand("encode", "encode a symbol message");
  encode_cmd->add_option("--trees", trees_dir, "directory holding t0.tree/t1.tree")->required();
  encode_cmd->add_option("-i,--input", input, "message file (whitespace-separated labels)")->required();
  encode_cmd->add_option("-o,--output", output, "container output path")->required();

  auto* decode_cmd = app.add_subcommand("decode", "decode a container");
  decode_cmd->add_option("--trees", trees_dir, "directory holding t0.tree/t1.tree")->required();
  decode_cmd->add_option("-i,--input", input, "container path")->required();
  decode_cmd->add_option("-o,--output", output, "message output path (stdout if omitted)");

  auto* compare_cmd = app.add_subcommand("compare", "entropy vs AIFV-2 vs Huffman");
  compare_cmd->add_option("-i,--input", input, "distribution file")->required();
  compare_cmd->add_option("--method", method, "solver method");

  auto* envelope_cmd = app.add_subcommand("envelope", "sample E0/E1/M over [0,1]");
  envelope_cmd->add_option("-i,--input", input, "distribution file")->required();
  envelope_cmd->add_option("--samples", samples, "grid size (default 256)");

  auto* sweep_cmd = app.add_subcommand("sweep", "grid over dyadic distributions");
  sweep_cmd->add_option("--max-n", max_n, "largest alphabet size (default 5)");
  sweep_cmd->add_option("--bits", bits, "probability grid width b (default 4)");
  sweep_cmd->add_option("--method", method, "solver method");
  sweep_cmd->add_option("--samples", sweep_samples, "extra random instances");
  sweep_cmd->add_option("--seed", seed, "seed for the random instances");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (solve_cmd->parsed()) return cmd_solve(input, method, output);
    if (encode_cmd->parsed()) return cmd_encode(trees_dir, input, output);
    if (decode_cmd->parsed()) return cmd_decode(trees_dir, input, output);
    if (compare_cmd->parsed()) return cmd_compare(input, method);
    if (envelope_cmd->parsed()) return cmd_envelope(input, samples);
    if (sweep_cmd->parsed()) return cmd_sweep(max_n, bits, method, sweep_samples, seed);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
