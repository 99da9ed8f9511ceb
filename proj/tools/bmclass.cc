#include <algorithm>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bmclass/catalog.hpp"
#include "bmclass/cocycle.hpp"
#include "bmclass/database.hpp"
#include "bmclass/engine.hpp"
#include "bmclass/errors.hpp"
#include "bmclass/report.hpp"

using namespace bmclass;

namespace
{

struct DbArgs
{
  std::vector<std::string> paths;
  bool strict = false;
  bool trust = false;
  bool tool_b_central = false;

  void add_to(CLI::App *cmd)
  {
    cmd->add_option("--db", paths, "Database file (repeatable)")->required();
    cmd->add_flag("--strict", strict, "Check the optional solvable/nilpotent flags");
    cmd->add_flag("--trust", trust, "Skip order validation on load");
    cmd->add_flag("--tool-b-central", tool_b_central, "Apply tool B to central kernels only");
  }

  Database load() const { return load_databases(paths, LoadOptions{trust, strict}); }
};

int run_classify(DbArgs const &dba, unsigned max_order, std::string const &solvable,
                 bool schinzel, std::string const &format)
{
  Database db = dba.load();
  RuleConfig cfg;
  cfg.assume_schinzel = schinzel;
  cfg.tool_b_central = dba.tool_b_central;
  Engine engine(cfg);
  ClassifyFilter filter;
  filter.max_order = max_order;
  filter.solvable = solvable == "only"      ? SolvableFilter::Only
                    : solvable == "exclude" ? SolvableFilter::Exclude
                                            : SolvableFilter::All;
  Report report = classify_database(db, filter, engine);
  emit_report(std::cout, report, format == "json" ? ReportFormat::Json : ReportFormat::Tsv, &db);
  return 0;
}

int run_explain(DbArgs const &dba, std::string const &id_text, bool schinzel, bool reverse)
{
  Database db = dba.load();
  GroupId id = GroupId::parse(id_text);
  GroupRecord const *rec = db.find(id);
  if (!rec)
    throw DataError("no record " + id.str() + " in the database");

  RuleConfig cfg;
  cfg.assume_schinzel = schinzel;
  cfg.tool_b_reverse = reverse;
  cfg.tool_b_central = dba.tool_b_central;
  Engine engine(cfg);
  TracePtr t = engine.classify(rec->group());

  emit_trace(std::cout, *t, &db, id.str() + " " + rec->name());
  if (t->level == BmLevel::UnderSchinzelH) {
    std::string src;
    auto sources = conditional_sources(*t, db);
    if (t->rule == Rule::Theorem12)
      sources.insert(id);
    for (auto const &s : sources)
      src += (src.empty() ? "" : "; ") + s.str();
    std::cout << "conditional on: " << src << '\n';
  }
  if (reverse)
    for (auto const &p : engine.tool_b_reverse(rec->group()))
      std::cout << "tool B iff: " << id.str() << " ~ " << group_label(p.group, p.trace, &db)
                << " (" << to_string(p.level()) << ")\n";
  std::cout << "reported: " << to_string(reported_level(t->level, schinzel)) << '\n';

  std::string why;
  if (!replay(*t, engine, &why)) {
    std::cout << "replay: failed (" << why << ")\n";
    return 2;
  }
  std::cout << "replay: ok\n";
  return 0;
}

int run_table(DbArgs const &dba, int number)
{
  Database db = dba.load();
  RuleConfig cfg;
  cfg.assume_schinzel = number != 1;
  cfg.tool_b_central = dba.tool_b_central;
  Engine engine(cfg);
  ClassifyFilter filter;
  filter.max_order = number == 1 ? 500 : 191;
  filter.solvable = number == 1 ? SolvableFilter::Exclude : SolvableFilter::All;
  Report report = classify_database(db, filter, engine);

  BmLevel want = number == 2 ? BmLevel::UnderSchinzelH : BmLevel::Unknown;
  std::vector<DisplayRow> rows;
  for (auto const &r : report.rows)
    if (reported_level(r.level, cfg.assume_schinzel) == want)
      rows.push_back(display_row(r, cfg.assume_schinzel, &db));
  emit_table(std::cout, rows);
  return 0;
}

std::vector<std::string> split(std::string const &text, char sep)
{
  std::vector<std::string> out;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, sep))
    out.push_back(part);
  if (!text.empty() && text.back() == sep)
    out.emplace_back();
  return out;
}

std::string describe_map(PermGroup const &N, ElemMap const &f)
{
  std::string out;
  for (Elem g : N.generator_indices()) {
    if (!out.empty())
      out += ", ";
    out += N.element(g).to_cycles() + " -> " + N.element(f[g]).to_cycles();
  }
  return out.empty() ? "trivial group" : out;
}

// One block per generator of Γ: SIGMA/X1/.../Xt, acting on coordinate i by
// n ↦ X_i⁻¹ n X_i after moving coordinate j to SIGMA(j).
std::vector<ElemMap> parse_action(std::string const &text, PermGroup const &gamma,
                                  PowerGroup const &P)
{
  std::size_t t = P.width();
  auto const &N = P.base();
  if (text.empty() && gamma.order() == 1)
    return std::vector<ElemMap>(gamma.generators().size(), identity_map(P.group().order()));
  auto blocks = text.empty() ? std::vector<std::string>{} : split(text, '|');
  if (blocks.size() != gamma.generators().size())
    throw std::invalid_argument("--action needs " + std::to_string(gamma.generators().size()) +
                                " blocks, one per generator of Gamma, separated by |");
  std::vector<ElemMap> images;
  for (auto const &block : blocks) {
    auto parts = split(block, '/');
    if (parts.size() != t + 1)
      throw std::invalid_argument("action block '" + block + "' needs SIGMA and " +
                                  std::to_string(t) + " conjugating permutations");
    Perm sigma = Perm::from_cycles(static_cast<unsigned>(t), parts[0]);
    std::vector<ElemMap> phis;
    for (std::size_t i = 0; i < t; ++i)
      phis.push_back(conjugation_map(N, Perm::from_cycles(N.degree(), parts[i + 1])));
    images.push_back(wreath_automorphism(P, phis, sigma));
  }
  return images;
}

int run_decompose(std::string const &gamma_name, std::string const &n_name, std::size_t t,
                  std::string const &action)
{
  PermGroup gamma = make_named(gamma_name);
  PermGroup N = make_named(n_name);
  if (t == 0)
    throw std::invalid_argument("--t must be positive");
  auto P = std::make_shared<PowerGroup const>(N, t);
  auto act = std::make_shared<GammaAction const>(
    GammaAction::from_generators(gamma, P->group(), parse_action(action, gamma, *P)));
  auto d = decompose_form(P, act);

  std::cout << "gamma: " << gamma_name << " (order " << gamma.order() << ")\n";
  std::cout << "N: " << n_name << " (order " << N.order() << "), t = " << t << '\n';
  std::cout << "orbits: " << d.pieces.size() << '\n';
  for (auto const &piece : d.pieces) {
    std::cout << "orbit of coordinate " << piece.rep + 1 << ":";
    for (std::size_t l : piece.orbit)
      std::cout << ' ' << l + 1;
    std::cout << '\n';
    auto const &S = piece.stabilizer;
    std::cout << "  stabilizer: order " << S.order() << ", index " << S.index();
    auto gens = S.generators();
    if (!gens.empty()) {
      std::cout << ", generators";
      for (Elem g : gens)
        std::cout << ' ' << gamma.element(g).to_cycles();
    }
    std::cout << '\n';
    auto const &theta = piece.theta;
    if (theta.is_trivial()) {
      std::cout << "  theta: trivial\n";
    } else {
      auto into = embedding(theta.gamma(), gamma);
      for (Elem g : gens) {
        Elem local = static_cast<Elem>(std::find(into.begin(), into.end(), g) - into.begin());
        std::cout << "  theta(" << gamma.element(g).to_cycles()
                  << "): " << describe_map(N, theta.map(local)) << '\n';
      }
    }
  }
  std::cout << "verified: Gamma-equivariant isomorphism on " << P->group().order()
            << " elements\n";
  return 0;
}

int run_shapiro(std::string const &gamma_name, std::string const &delta_text,
                std::string const &n_name)
{
  PermGroup gamma = make_named(gamma_name);
  PermGroup N = make_named(n_name);
  std::vector<Elem> dgens;
  if (delta_text != "1") {
    for (auto const &p : parse_generators(gamma.degree(), delta_text)) {
      auto e = gamma.find(p);
      if (!e)
        throw std::invalid_argument(p.to_cycles() + " is not an element of Gamma");
      dgens.push_back(*e);
    }
  }
  Subgroup delta = generate(gamma, dgens);
  auto base = std::make_shared<GammaAction const>(GammaAction::trivial(delta.as_group(), N));
  auto ind = std::make_shared<InducedGroup const>(build_induced(base, CosetSystem(gamma, delta)));

  auto targets = enumerate_cocycles(base);
  std::set<std::vector<Elem>> hit;
  std::size_t formula_failures = 0;
  std::size_t count = for_each_cocycle(ind->carrier, [&](std::vector<Elem> const &values) {
    hit.insert(shapiro(ind, values).values);
    formula_failures += !check_component_formula(*ind, values);
  }, 1'000'000);

  auto const &D = base->gamma();
  std::cout << "gamma: " << gamma_name << " (order " << gamma.order() << ")\n";
  std::cout << "delta: order " << delta.order() << ", index " << delta.index() << '\n';
  std::cout << "N: " << n_name << " (order " << N.order() << "), trivial action\n";
  std::cout << "|Z1(Gamma, Ind)| = " << count << '\n';
  std::cout << "|Z1(Delta, N)| = " << targets.size() << '\n';
  std::size_t hits = 0;
  for (auto const &z : targets)
    hits += hit.count(z.values);
  std::cout << "homomorphisms hit: " << hits << " of " << targets.size() << '\n';
  for (auto const &z : targets) {
    std::string images;
    for (Elem g : D.generator_indices()) {
      if (!images.empty())
        images += ", ";
      images += D.element(g).to_cycles() + " -> " + N.element(z(g)).to_cycles();
    }
    std::cout << "  " << (images.empty() ? "trivial" : images) << ": "
              << (hit.count(z.values) ? "hit" : "missed") << '\n';
  }
  std::cout << "component formula failures: " << formula_failures << '\n';
  return 0;
}

} // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Classification of finite groups by known (BM) results"};
  app.require_subcommand(1);

  DbArgs classify_db;
  unsigned max_order = 0;
  std::string solvable = "all";
  bool schinzel = false;
  std::string format = "tsv";
  auto *classify = app.add_subcommand("classify", "Classify every database record");
  classify_db.add_to(classify);
  classify->add_option("--max-order", max_order, "Largest order to classify");
  classify->add_option("--solvable", solvable, "only|exclude|all")
    ->check(CLI::IsMember({"only", "exclude", "all"}));
  classify->add_flag("--assume-schinzel", schinzel, "Report conditional results");
  classify->add_option("--format", format, "tsv|json")->check(CLI::IsMember({"tsv", "json"}));

  DbArgs explain_db;
  std::string id;
  bool explain_schinzel = false;
  bool reverse = false;
  auto *explain = app.add_subcommand("explain", "Print and replay the derivation for one record");
  explain_db.add_to(explain);
  explain->add_option("--id", id, "ORDER,INDEX")->required();
  explain->add_flag("--assume-schinzel", explain_schinzel, "Report conditional results");
  explain->add_flag("--tool-b-reverse", reverse, "Also list groups tied to this one by tool B");

  DbArgs table_db;
  int number = 1;
  auto *table = app.add_subcommand("table", "Reproduce one of the three tables");
  table_db.add_to(table);
  table->add_option("--number", number, "1|2|3")->required()->check(CLI::Range(1, 3));

  std::string gamma_name;
  std::string n_name;
  std::size_t power = 1;
  std::string action;
  auto *decompose =
    app.add_subcommand("decompose-form", "Split an action on N^t into induced pieces");
  decompose->add_option("--gamma", gamma_name, "Acting group name")->required();
  decompose->add_option("--n", n_name, "Factor group name")->required();
  decompose->add_option("--t", power, "Number of factors")->required();
  decompose->add_option("--action", action,
                        "SIGMA/X1/.../Xt per generator of Gamma, blocks separated by |");

  std::string sh_gamma;
  std::string sh_delta = "1";
  std::string sh_n;
  auto *shap = app.add_subcommand("shapiro", "Push cocycles of an induced group down to Delta");
  shap->add_option("--gamma", sh_gamma, "Acting group name")->required();
  shap->add_option("--delta", sh_delta, "Generators of Delta inside Gamma, or 1")->required();
  shap->add_option("--n", sh_n, "Coefficient group name")->required();

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const &e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*classify)
      return run_classify(classify_db, max_order, solvable, schinzel, format);
    if (*explain)
      return run_explain(explain_db, id, explain_schinzel, reverse);
    if (*table)
      return run_table(table_db, number);
    if (*decompose)
      return run_decompose(gamma_name, n_name, power, action);
    if (*shap)
      return run_shapiro(sh_gamma, sh_delta, sh_n);
  } catch (ParseError const &e) {
    std::cerr << "error: " << e.what() << '\n';
    return *explain && e.line() == 0u ? 1 : 2;
  } catch (DataError const &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (BudgetExceeded const &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (UnknownName const &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (InvalidPermutation const &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (std::invalid_argument const &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (std::exception const &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
