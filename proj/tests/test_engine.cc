#include <cstdlib>
#include <map>
#include <sstream>

#include "doctest.h"

#include "bmclass/catalog.hpp"
#include "bmclass/engine.hpp"
#include "bmclass/errors.hpp"
#include "bmclass/report.hpp"
#include "bmclass/structure.hpp"
#include "oracles.hpp"

using namespace bmclass;

namespace
{

Database const &both()
{
  static Database db = load_databases(
    {BMCLASS_DATA_DIR "/nonsolvable_500.db", BMCLASS_DATA_DIR "/nonnilpotent_191.db"});
  return db;
}

PermGroup const &rec(char const *id) { return both().find(GroupId::parse(id))->group(); }

GroupId id_of(PermGroup const &G) { return identify(G, both()).value(); }

std::map<GroupId, BmLevel> levels(Report const &r)
{
  std::map<GroupId, BmLevel> out;
  for (auto const &row : r.rows)
    out[row.id] = row.level;
  return out;
}

std::set<GroupId> with_level(Report const &r, BmLevel level)
{
  std::set<GroupId> out;
  for (auto const &row : r.rows)
    if (row.level == level)
      out.insert(row.id);
  return out;
}

std::set<GroupId> ids(std::initializer_list<char const *> list)
{
  std::set<GroupId> out;
  for (auto s : list)
    out.insert(GroupId::parse(s));
  return out;
}

std::set<GroupId> const table2 =
  ids({"48,28",  "48,33",  "72,3",   "96,3",    "96,66",   "96,67",   "96,74",   "96,188",
       "96,190", "96,191", "96,192", "96,193",  "96,200",  "96,201",  "96,202",  "144,31",
       "144,32", "144,35", "144,36", "144,121", "144,124", "144,127", "144,157", "160,199"});

// A5 x| C8 with the generator of C8 acting as a transposition.
PermGroup a5_by_c8()
{
  return close_generators(13, {Perm::from_cycles(13, "(1,2,3)"), Perm::from_cycles(13, "(1,2,3,4,5)"),
                               Perm::from_cycles(13, "(1,2)(6,7,8,9,10,11,12,13)")});
}

} // namespace

TEST_CASE("base_status examples")
{
  Engine e;
  auto c12 = e.base_status(make_named("C12"));
  REQUIRE(c12);
  CHECK(c12->rule == Rule::ToolD);
  CHECK(c12->level == BmLevel::Unconditional);

  auto a5 = e.base_status(make_named("A5"));
  REQUIRE(a5);
  CHECK(a5->rule == Rule::Reminder);

  CHECK_FALSE(e.base_status(make_named("A4")));
  CHECK(e.base_status(make_named("C1"))->rule == Rule::ToolD);

  for (char const *name : {"S4", "S5", "GL2(3)", "SL2(5)", "PSL2(7)", "Q8", "SL2(3)", "GL3(2)"}) {
    CAPTURE(name);
    auto t = e.base_status(make_named(name));
    REQUIRE(t);
    CHECK(t->level == BmLevel::Unconditional);
  }
}

TEST_CASE("tool A examples")
{
  Engine e;
  auto a4 = e.rule_toolA(make_named("A4"));
  REQUIRE(a4);
  CHECK(a4->level == BmLevel::Unconditional);
  CHECK(a4->witness.kernel->order() == 4u);
  CHECK(oracle::has_complement_brute(a4->group, a4->witness.kernel->membership(),
                                     oracle::all_subgroups(a4->group)));

  auto s4 = e.rule_toolA(make_named("S4"));
  REQUIRE(s4);
  CHECK(s4->level == BmLevel::Unconditional);
  CHECK(s4->witness.kernel->order() == 4u);
  CHECK(s4->premises.front().group.order() == 6u);

  CHECK_FALSE(e.rule_toolA(make_named("Q8")));
  CHECK(e.classify(make_named("Q8"))->level == BmLevel::Unconditional);
}

TEST_CASE("tool C examples")
{
  Engine e;
  auto t = e.rule_toolC(rec("96,188"));
  REQUIRE(t);
  CHECK(t->level == BmLevel::UnderSchinzelH);
  std::set<GroupId> got;
  for (auto const &p : t->premises)
    if (p.group.order() == 48u)
      got.insert(id_of(p.group));
  CHECK(got == ids({"48,28"}));

  auto s3s3 = e.rule_toolC(make_named("S3xS3"));
  REQUIRE(s3s3);
  CHECK(s3s3->level == BmLevel::Unconditional);

  CHECK_FALSE(e.rule_toolC(make_named("S5")));
  CHECK_FALSE(e.rule_toolC(rec("48,28")));
}

TEST_CASE("theorem 1.1 examples")
{
  Engine e;
  PermGroup G = a5_by_c8();
  REQUIRE(G.order() == 480u);
  auto t = e.rule_theorem11(G);
  REQUIRE(t);
  CHECK(t->level == BmLevel::Unconditional);
  CHECK(t->witness.shape->t0 == 1u);
  CHECK(is_cyclic(t->premises.front().group));
  CHECK(e.classify(G)->level == BmLevel::Unconditional);

  auto s5c3 = e.rule_theorem11(make_named("S5xC3"));
  REQUIRE(s5c3);
  CHECK(s5c3->level == BmLevel::Unconditional);

  CHECK_FALSE(e.rule_theorem11(make_named("S6")));
}

TEST_CASE("tool B examples")
{
  Engine e;
  auto b = e.rule_toolB(rec("240,89"));
  REQUIRE(b);
  CHECK(b->witness.n == 5u);
  CHECK(b->level == BmLevel::UnderSchinzelH);
  CHECK(id_of(b->premises.front().group) == GroupId{48, 28});

  auto b2 = e.rule_toolB(rec("480,219"));
  REQUIRE(b2);
  CHECK(id_of(b2->premises.front().group) == GroupId{96, 66});

  CHECK_FALSE(e.rule_toolB(make_named("S5")));
}

TEST_CASE("tool B over a non-central kernel")
{
  PermGroup const &G = rec("480,953");
  Engine relaxed;
  auto t = relaxed.rule_toolB(G);
  REQUIRE(t);
  CHECK_FALSE(center(G).order() == t->witness.kernel->order());
  CHECK(id_of(t->premises.front().group) == GroupId{96, 190});

  RuleConfig strict;
  strict.tool_b_central = true;
  Engine s(strict);
  CHECK_FALSE(s.rule_toolB(G));
  CHECK(s.classify(G)->level == BmLevel::Unknown);
}

TEST_CASE("theorem 1.2 examples")
{
  Engine e;
  auto t = e.rule_theorem12(rec("48,28"));
  REQUIRE(t);
  CHECK(t->level == BmLevel::UnderSchinzelH);
  CHECK(t->witness.kernel->order() == 8u);
  CHECK(are_isomorphic(t->premises.front().group, make_named("S3")));

  auto h = e.rule_theorem12(rec("160,199"));
  REQUIRE(h);
  CHECK(h->witness.kernel->order() == 32u);
  CHECK(is_cyclic(h->premises.front().group));

  CHECK_FALSE(e.rule_theorem12(rec("108,15")));
}

TEST_CASE("classify examples")
{
  Engine e;
  CHECK(e.classify(rec("360,118"))->level == BmLevel::Unknown);
  CHECK(e.classify(rec("336,208"))->level == BmLevel::Unknown);
  CHECK(e.classify(rec("144,121"))->level == BmLevel::UnderSchinzelH);
  CHECK(e.rule_toolC(rec("144,121"))->level == BmLevel::UnderSchinzelH);
  CHECK(e.classify(rec("108,15"))->level == BmLevel::Unknown);
}

TEST_CASE("classify is deterministic and memo-independent")
{
  Engine a;
  Engine b;
  // a sees the premises first, b only the top group
  a.classify(rec("48,28"));
  auto ta = a.classify(rec("96,188"));
  auto tb = b.classify(rec("96,188"));
  CHECK(ta->level == tb->level);
  CHECK(ta->rule == tb->rule);
  CHECK(a.memo_size() >= b.memo_size());
}

TEST_CASE("recursion depth cap")
{
  RuleConfig cfg;
  cfg.depth_cap = 0;
  Engine e(cfg);
  CHECK_THROWS_AS(e.classify(rec("48,28")), DepthExceeded);
  CHECK(e.classify(make_named("C6"))->level == BmLevel::Unconditional);
}

TEST_CASE("conditional sources follow the trace")
{
  Engine e;
  CHECK(conditional_sources(*e.classify(rec("480,949")), both()) == ids({"48,28"}));
  CHECK(conditional_sources(*e.classify(rec("96,188")), both()) == ids({"48,28"}));
  CHECK(conditional_sources(*e.classify(rec("480,219")), both()) == ids({"96,66"}));
  CHECK(conditional_sources(*e.classify(rec("48,28")), both()).empty());
}

TEST_CASE("tool B reverse direction is flag-gated")
{
  Engine off;
  CHECK(off.tool_b_reverse(rec("480,949")).empty());
  RuleConfig cfg;
  cfg.tool_b_reverse = true;
  Engine on(cfg);
  auto r = on.tool_b_reverse(rec("480,949"));
  REQUIRE(r.size() == 1u);
  CHECK(id_of(r.front().group) == GroupId{96, 188});
  CHECK(r.front().level() == BmLevel::UnderSchinzelH);
}

TEST_CASE("every trace up to order 191 replays")
{
  Engine e;
  Report r = classify_database(both(), {191, SolvableFilter::All}, e);
  CHECK(r.rows.size() > 1000u);
  std::size_t failures = 0;
  for (auto const &row : r.rows) {
    std::string why;
    if (!replay(*row.trace, e, &why)) {
      ++failures;
      MESSAGE(row.id.str() << ": " << why);
    }
  }
  CHECK(failures == 0u);
}

TEST_CASE("disabling rules never lowers a level")
{
  Engine full;
  auto base = levels(classify_database(both(), {191, SolvableFilter::All}, full));
  for (Rule r : {Rule::ToolA, Rule::ToolC, Rule::Theorem11, Rule::ToolB, Rule::Theorem12}) {
    CAPTURE(rule_tag(r));
    RuleConfig cfg;
    cfg.disabled.insert(r);
    Engine e(cfg);
    auto lv = levels(classify_database(both(), {191, SolvableFilter::All}, e));
    std::size_t lowered = 0;
    for (auto const &[id, l] : lv)
      lowered += l < base.at(id) ? 1u : 0u;
    CHECK(lowered == 0u);
  }
}

TEST_CASE("without theorem 1.2 exactly the conditional groups become Unknown")
{
  Engine full;
  auto before = levels(classify_database(both(), {191, SolvableFilter::All}, full));
  RuleConfig cfg;
  cfg.disabled.insert(Rule::Theorem12);
  Engine e(cfg);
  auto after = levels(classify_database(both(), {191, SolvableFilter::All}, e));
  std::set<GroupId> changed;
  for (auto const &[id, l] : after)
    if (l != before.at(id))
      changed.insert(id);
  CHECK(changed == table2);
  for (auto const &id : table2)
    CHECK(after.at(id) == BmLevel::Unknown);
}

TEST_CASE("parallel classification matches serial")
{
  auto run = [](char const *threads) {
    setenv("BMCLASS_THREADS", threads, 1);
    Engine e;
    auto r = levels(classify_database(both(), {96, SolvableFilter::All}, e));
    unsetenv("BMCLASS_THREADS");
    return r;
  };
  CHECK(run("1") == run("4"));
}

TEST_CASE("classify_database filters and nilpotent tallies")
{
  Engine e;
  Report none = classify_database(both(), {191, SolvableFilter::Exclude}, e);
  CHECK(none.nilpotent.empty());
  for (auto const &row : none.rows)
    CHECK_FALSE(is_solvable(row.trace->group));

  Report small = classify_database(both(), {12, SolvableFilter::All}, e);
  CHECK(with_level(small, BmLevel::Unknown).empty());
  std::size_t tally = 0;
  for (auto const &n : small.nilpotent)
    tally += n.count;
  // nilpotent groups of orders 1..12
  CHECK(tally == 1u + 1 + 1 + 2 + 1 + 1 + 1 + 5 + 2 + 1 + 1 + 2);
  CHECK(small.rows.size() + tally == 1u + 1 + 1 + 2 + 1 + 2 + 1 + 5 + 2 + 2 + 1 + 5);
}

TEST_CASE("report formats")
{
  Report empty;
  std::ostringstream tsv;
  emit_report(tsv, empty, ReportFormat::Tsv);
  CHECK(tsv.str() == "order\tid\tname\tstatus\trule\tpremise-ids\n");

  RuleConfig cfg;
  cfg.assume_schinzel = true;
  Engine e(cfg);
  Report r = classify_database(both(), {191, SolvableFilter::All}, e);
  std::vector<DisplayRow> rows;
  for (auto const &row : r.rows)
    if (row.level == BmLevel::Unknown)
      rows.push_back(display_row(row, true, &both()));
  std::ostringstream table;
  emit_table(table, rows);
  CHECK(table.str() == "108 | 108,15 | He3:C4 | Unknown | - | -\n");

  ReportRow cond{GroupId{48, 28}, "CSU2(F3)", BmLevel::UnderSchinzelH, e.classify(rec("48,28"))};
  auto hidden = display_row(cond, false, &both());
  CHECK(hidden.status == "Unknown");
  CHECK(hidden.rule == "-");
  CHECK(hidden.premises == "-");
  auto shown = display_row(cond, true, &both());
  CHECK(shown.status == "UnderSchinzelH");
  CHECK(shown.rule == "Thm1.2");
  CHECK(shown.premises == "6,1");

  Report one;
  one.rows.push_back(cond);
  std::ostringstream json;
  emit_report(json, one, ReportFormat::Json, &both());
  CHECK(json.str().find("\"premise-ids\": \"-\"") != std::string::npos);
}
