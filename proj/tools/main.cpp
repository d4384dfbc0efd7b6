#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "gaugecert/decompose.hpp"
#include "gaugecert/gauge.hpp"
#include "gaugecert/random.hpp"
#include "gaugecert/report.hpp"
#include "gaugecert/sweep.hpp"

using namespace gaugecert;

namespace {

std::string read_all(const std::string& path) {
  if (path == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    return os.str();
  }
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream f(out);
  if (!f) throw PreconditionError("cannot write '" + out + "'");
  f << text;
  if (!text.empty() && text.back() != '\n') f << '\n';
}

std::vector<BSeq> read_generators(const std::string& text) {
  std::vector<BSeq> bs;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    bs.push_back(parse_bseq(line));
  }
  return bs;
}

std::vector<Rational> parse_list(const std::string& text) {
  std::vector<Rational> out;
  std::string tok;
  std::istringstream in(text);
  while (std::getline(in, tok, ',')) {
    if (!tok.empty()) out.push_back(parse_rational(tok));
  }
  return out;
}

void summarize(const Report& r) {
  std::cerr << r.suite << ": " << r.records.size() << " trials, " << r.failures().size() << " failures\n";
  for (const auto* f : r.failures()) std::cerr << "  trial " << f->trial << ": " << f->failure << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified finite-scale checks for a c0-saturated Banach space construction"};
  app.require_subcommand(1);

  std::string p_text = "3/2";
  std::string eps_text;
  std::uint64_t seed = 1;
  std::int64_t trials = 100;
  std::int64_t max_row = 50;
  std::int64_t max_m = 200;
  std::string out;
  std::string format = "json";
  std::string tol_text = "1/1000";
  unsigned threads = 1;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--p", p_text, "Lorentz exponent NUM/DEN, 1 < p < 2")->capture_default_str();
    sub->add_option("--epsilon", eps_text, "epsilon as NUM/DEN");
    sub->add_option("--seed", seed, "RNG seed")->capture_default_str();
    sub->add_option("--out", out, "output path (default stdout)");
    sub->add_option("--format", format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
  };

  auto* sweep = app.add_subcommand("sweep", "run a randomized property suite");
  std::string suite;
  sweep->add_option("suite", suite, "suite name")->required()->check(CLI::IsMember(suite_names()));
  add_common(sweep);
  sweep->add_option("--trials", trials, "number of trials")->capture_default_str();
  sweep->add_option("--max-row", max_row, "row cap")->capture_default_str();
  sweep->add_option("--max-m", max_m, "generator-count cap")->capture_default_str();
  sweep->add_option("--tol", tol_text, "oracle tolerance")->capture_default_str();
  sweep->add_option("--threads", threads, "worker threads")->capture_default_str();

  auto* decompose = app.add_subcommand("decompose", "decompose an average of generators");
  std::string gen_path;
  std::string verify_path;
  decompose->add_option("--input", gen_path, "generator file, one 'b: m1 m2 ...' per line ('-' for stdin)");
  decompose->add_option("--verify", verify_path, "re-verify a certificate JSON file instead");
  add_common(decompose);
  decompose->add_option("--max-m", max_m, "generator count for a random instance")->capture_default_str();
  decompose->add_option("--max-row", max_row, "rows for a random instance")->capture_default_str();

  auto* tau = app.add_subcommand("tau-bounds", "certified lower/upper bounds on the gauge");
  std::string x_path;
  bool oracle = false;
  tau->add_option("--input", x_path, "TriVector file ('-' for stdin)")->required();
  tau->add_flag("--oracle", oracle, "also run the micro oracle (rows <= 3)");
  tau->add_option("--tol", tol_text, "oracle tolerance")->capture_default_str();
  add_common(tau);

  auto* quotient = app.add_subcommand("quotient", "quotient-functional witness for a unit b");
  std::string b_text;
  quotient->add_option("--b", b_text, "comma separated rationals with sum of squares 1");
  add_common(quotient);

  auto* replay = app.add_subcommand("replay", "re-run trials of a report");
  std::string report_path;
  std::vector<std::uint64_t> trial_ids;
  replay->add_option("report", report_path, "report JSON")->required();
  replay->add_option("--trial", trial_ids, "trial indices (default: the recorded failures)");

  auto* report = app.add_subcommand("report", "summarize or convert a report");
  report->add_option("report", report_path, "report JSON")->required();
  report->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  report->add_option("--out", out, "output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    const LorentzParam p = LorentzParam::parse(p_text);
    std::optional<Rational> eps;
    if (!eps_text.empty()) eps = parse_rational(eps_text);

    if (sweep->parsed()) {
      SweepConfig c;
      c.suite = suite;
      c.p = p;
      c.seed = seed;
      c.trials = trials;
      c.max_row = max_row;
      c.max_m = max_m;
      c.epsilon = eps;
      c.tol = parse_rational(tol_text);
      c.threads = threads;
      Report r = run_suite(c);
      emit(format == "csv" ? report_csv(r) : report_json(r), out);
      summarize(r);
      return r.pass() ? 0 : 1;
    }

    if (decompose->parsed()) {
      if (!verify_path.empty()) {
        DecompositionCertificate cert = decomposition_from_json(read_all(verify_path));
        VerifyReport vr = verify_decomposition(cert);
        for (const auto& f : vr.failures) std::cerr << "FAIL " << f << "\n";
        std::cout << (vr.ok() ? "certificate verified" : "certificate rejected") << "\n";
        return vr.ok() ? 0 : 1;
      }
      std::vector<BSeq> bs;
      Rational e;
      if (!gen_path.empty()) {
        bs = read_generators(read_all(gen_path));
        e = eps ? *eps : sup_norm(average_generators(bs));
      } else {
        e = eps ? *eps : Rational(1, 16);
        auto rng = trial_stream(seed, "decompose", 0);
        const std::int64_t den = e.get_den().get_si();
        bs = smallsup_generators(rng, e, std::max<std::int64_t>(den, max_m / den * den), max_row);
      }
      DecompositionCertificate cert = main_decompose(bs, e, p);
      emit(to_json(cert), out);
      std::cerr << "t=" << cert.blocks.size() << " scale=" << to_double(cert.scale) << " digest=" << digest(cert)
                << "\n";
      return 0;
    }

    if (tau->parsed()) {
      TriVector x = parse_trivector(read_all(x_path));
      GaugeConfig gc;
      gc.p = p;
      gc.seed = seed;
      LowerBound lo = tau_lower(x, gc);
      UpperBound up = tau_upper(x, gc);
      std::ostringstream os;
      os << "{\"lower\":" << to_json(lo) << ",\"upper\":" << to_json(up);
      bool ok = lo.lo <= up.hi;
      if (oracle) {
        GaugeInterval g = tau_micro_oracle(x, parse_rational(tol_text), gc);
        os << ",\"oracle\":" << to_json(g);
        ok = ok && lo.lo <= g.lo && g.lo <= g.hi && g.hi <= up.hi;
      }
      os << "}";
      emit(os.str(), out);
      std::cerr << "tau in [" << to_double(lo.lo) << ", " << to_double(up.hi) << "]\n";
      return ok ? 0 : 1;
    }

    if (quotient->parsed()) {
      std::vector<Rational> b;
      if (b_text.empty()) {
        auto rng = trial_stream(seed, "quotient-cli", 0);
        b = random_unit_b(rng, 8, 6);
      } else {
        b = parse_list(b_text);
      }
      QuotientWitness w = quotient_witness(b);
      emit(to_json(w), out);
      const bool ok = w.pairing >= Rational(2, 9) && check_quotient_witness(w, b, p);
      std::cerr << "branch " << w.branch << ", pairing " << to_string(w.pairing) << (ok ? " >= 2/9" : " FAILED")
                << "\n";
      return ok ? 0 : 1;
    }

    if (replay->parsed()) {
      Report r = report_from_json(read_all(report_path));
      if (trial_ids.empty()) {
        for (const auto* f : r.failures()) trial_ids.push_back(f->trial);
      }
      bool all_pass = true;
      for (auto t : trial_ids) {
        TrialRecord now = run_trial(r.config, t);
        const TrialRecord* was = nullptr;
        for (const auto& rec : r.records) {
          if (rec.trial == t) was = &rec;
        }
        const bool same = was && was->pass == now.pass && was->failure == now.failure && was->digest == now.digest;
        std::cout << "trial " << t << ": " << (now.pass ? "pass" : "FAIL: " + now.failure)
                  << (was ? (same ? " (reproduced)" : " (DIFFERS from report)") : " (not in report)") << "\n";
        all_pass = all_pass && now.pass;
      }
      if (trial_ids.empty()) std::cout << "no failures recorded\n";
      return all_pass ? 0 : 1;
    }

    if (report->parsed()) {
      Report r = report_from_json(read_all(report_path));
      if (!out.empty() || report->count("--format")) emit(format == "csv" ? report_csv(r) : report_json(r), out);
      summarize(r);
      for (const auto& [k, v] : r.stats) std::cerr << "  " << k << " = " << v << "\n";
      return r.pass() ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
