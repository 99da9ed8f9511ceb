#include "bmclass/engine.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <stdexcept>
#include <thread>

#include "bmclass/errors.hpp"
#include "bmclass/structure.hpp"

namespace bmclass
{

char const *to_string(BmLevel level)
{
  switch (level) {
  case BmLevel::Unconditional:
    return "Unconditional";
  case BmLevel::UnderSchinzelH:
    return "UnderSchinzelH";
  case BmLevel::Unknown:
    return "Unknown";
  }
  return "?";
}

namespace
{

constexpr std::array<std::pair<Rule, char const *>, 8> rule_tags{{
  {Rule::None, "-"},
  {Rule::Reminder, "Reminder"},
  {Rule::ToolD, "D"},
  {Rule::ToolA, "A"},
  {Rule::ToolC, "C"},
  {Rule::Theorem11, "Thm1.1"},
  {Rule::ToolB, "B"},
  {Rule::Theorem12, "Thm1.2"},
}};

// Groups with a known unconditional answer, by order.
struct BaseEntry
{
  std::size_t order;
  char const *name;
};

constexpr std::array<BaseEntry, 11> base_list{{
  {6, "S3"},
  {8, "Q8"},
  {24, "S4"},
  {24, "SL2(3)"},
  {48, "GL2(3)"},
  {60, "A5"},
  {120, "S5"},
  {120, "SL2(5)"},
  {168, "PSL2(7)"},
  {720, "S6"},
  {5040, "S7"},
}};

// Orders of A5^t0 x prod S_n^t with n not in {2, 6}.
bool is_power_product_order(std::size_t order)
{
  static constexpr std::array<std::size_t, 5> parts{60, 6, 24, 120, 5040};
  if (order == 1u)
    return true;
  for (auto p : parts)
    if (order % p == 0u && is_power_product_order(order / p))
      return true;
  return false;
}

std::shared_ptr<ProofTrace> make_trace(Rule rule, BmLevel level, PermGroup const &G)
{
  auto t = std::make_shared<ProofTrace>();
  t->rule = rule;
  t->level = level;
  t->group = G;
  return t;
}

bool is_elementary_abelian_2(Subgroup const &V)
{
  PermGroup const &G = V.parent();
  for (Elem x : V.elements())
    if (G.element_order(x) > 2u)
      return false;
  return true;
}

bool is_central(Subgroup const &V)
{
  return intersection(V, center(V.parent())).order() == V.order();
}

bool is_complement(Subgroup const &K, Subgroup const &N)
{
  return K.order() * N.order() == N.parent().order() && intersection(K, N).is_trivial();
}

struct ToolBWitness
{
  Subgroup V;
  unsigned n;
  Subgroup E;
};

// Preimage of the stabilizer of `point` (0-based) under an iso S_n -> G/V.
Subgroup stabilizer_preimage(QuotientGroup const &q, PermGroup const &Sn,
                             std::vector<Elem> const &iso, unsigned point)
{
  std::vector<Elem> stab;
  for (Elem s = 0; s < Sn.order(); ++s)
    if (Sn.element(s).image0(point) == point)
      stab.push_back(iso[s]);
  return q.preimage(Subgroup(q.quotient, std::move(stab)));
}

std::vector<ToolBWitness> tool_b_candidates(PermGroup const &G, std::vector<Subgroup> const &normals,
                                           bool central)
{
  std::vector<ToolBWitness> out;
  for (auto const &V : normals) {
    if (V.is_trivial())
      continue;
    std::size_t qo = G.order() / V.order();
    unsigned n = 0;
    for (unsigned m = 3, f = 6; m <= 7u; m += 2, f *= (m - 1) * m)
      if (f == qo)
        n = m;
    if (n == 0u || !is_elementary_abelian_2(V) || (central && !is_central(V)))
      continue;
    auto q = quotient(G, V);
    PermGroup const &Sn = named_group("S" + std::to_string(n));
    auto iso = find_isomorphism(Sn, q.quotient);
    if (!iso)
      continue;
    Subgroup E = stabilizer_preimage(q, Sn, *iso, n - 1);
    Subgroup E2 = stabilizer_preimage(q, Sn, *iso, 0);
    if (!are_isomorphic(E.as_group(), E2.as_group()))
      throw std::logic_error("tool B: conjugate point stabilizers give non-isomorphic preimages");
    out.push_back({V, n, std::move(E)});
  }
  return out;
}

} // namespace

char const *rule_tag(Rule rule)
{
  for (auto const &[r, tag] : rule_tags)
    if (r == rule)
      return tag;
  return "?";
}

std::optional<Rule> parse_rule_tag(std::string const &tag)
{
  for (auto const &[r, t] : rule_tags)
    if (tag == t)
      return r;
  return std::nullopt;
}

BmLevel Premise::level() const { return trace ? trace->level : BmLevel::Unknown; }

struct Engine::Context
{
  PermGroup G;
  unsigned depth;
  std::optional<std::vector<Subgroup>> normals_;

  std::vector<Subgroup> const &normals()
  {
    if (!normals_)
      normals_ = normal_subgroups(G);
    return *normals_;
  }
};

Engine::Engine(RuleConfig config) : _config(std::move(config)) {}

std::size_t Engine::memo_size() const
{
  std::lock_guard lock(_mutex);
  std::size_t n = 0;
  for (auto const &[fp, bucket] : _memo)
    n += bucket.size();
  return n;
}

TracePtr Engine::classify(PermGroup const &G)
{
  TracePtr t = compute(G, 0);
  Fingerprint fp = fingerprint(G);
  std::vector<MemoEntry> bucket;
  {
    std::lock_guard lock(_mutex);
    bucket = _memo[fp];
  }
  for (auto const &e : bucket)
    if (are_isomorphic(e.rep, G))
      return t;
  std::lock_guard lock(_mutex);
  _memo[fp].push_back({G, t});
  return t;
}

TracePtr Engine::status(PermGroup const &G) { return sub_status(G, 0); }

TracePtr Engine::sub_status(PermGroup const &H, unsigned depth)
{
  if (depth > _config.depth_cap)
    throw DepthExceeded("rule recursion deeper than " + std::to_string(_config.depth_cap));

  Fingerprint fp = fingerprint(H);
  std::vector<MemoEntry> bucket;
  {
    std::lock_guard lock(_mutex);
    auto it = _memo.find(fp);
    if (it != _memo.end())
      bucket = it->second;
  }
  for (auto const &e : bucket)
    if (are_isomorphic(e.rep, H))
      return e.trace;

  TracePtr t = compute(H, depth);

  std::lock_guard lock(_mutex);
  auto &live = _memo[fp];
  for (std::size_t i = bucket.size(); i < live.size(); ++i)
    if (are_isomorphic(live[i].rep, H))
      return live[i].trace;
  live.push_back({H, t});
  return t;
}

TracePtr Engine::compute(PermGroup const &G, unsigned depth)
{
  Context ctx{G, depth, std::nullopt};
  if (auto t = base(ctx))
    return t;

  TracePtr best;
  for (Rule r : _config.order) {
    if (!_config.enabled(r))
      continue;
    TracePtr t = run_rule(r, ctx);
    if (t && (!best || t->level < best->level))
      best = t;
    if (best && best->level == BmLevel::Unconditional)
      break;
  }
  if (!best)
    best = make_trace(Rule::None, BmLevel::Unknown, G);
  return best;
}

TracePtr Engine::run_rule(Rule rule, Context &ctx)
{
  switch (rule) {
  case Rule::ToolA:
    return tool_a(ctx);
  case Rule::ToolC:
    return tool_c(ctx);
  case Rule::Theorem11:
    return theorem11(ctx);
  case Rule::ToolB:
    return tool_b(ctx);
  case Rule::Theorem12:
    return theorem12(ctx);
  default:
    return nullptr;
  }
}

TracePtr Engine::base(Context &ctx)
{
  PermGroup const &G = ctx.G;
  if (_config.enabled(Rule::Reminder)) {
    for (auto const &b : base_list) {
      if (b.order != G.order())
        continue;
      if (are_isomorphic(G, named_group(b.name))) {
        auto t = make_trace(Rule::Reminder, BmLevel::Unconditional, G);
        t->witness.note = b.name;
        return t;
      }
    }
  }
  if (_config.enabled(Rule::ToolD) && is_supersolvable(G))
    return make_trace(Rule::ToolD, BmLevel::Unconditional, G);
  return nullptr;
}

TracePtr Engine::tool_a(Context &ctx)
{
  PermGroup const &G = ctx.G;
  std::shared_ptr<ProofTrace> best;
  for (auto const &A : ctx.normals()) {
    if (A.is_trivial() || !is_abelian(A.as_group()))
      continue;
    auto q = quotient(G, A);
    TracePtr qs = sub_status(q.quotient, ctx.depth + 1);
    if (qs->level == BmLevel::Unknown || (best && qs->level >= best->level))
      continue;
    auto K = find_complement(G, A);
    if (!K)
      continue;
    best = make_trace(Rule::ToolA, qs->level, G);
    best->premises.push_back({"quotient", q.quotient, qs});
    best->witness.kernel = A;
    best->witness.complement = *K;
    if (best->level == BmLevel::Unconditional)
      break;
  }
  return best;
}

TracePtr Engine::tool_c(Context &ctx)
{
  PermGroup const &G = ctx.G;
  auto dec = direct_product_decomposition(G);
  if (dec.factors.size() < 2u)
    return nullptr;
  auto t = make_trace(Rule::ToolC, BmLevel::Unconditional, G);
  for (auto const &f : dec.factors) {
    PermGroup F = f.as_group();
    TracePtr fs = sub_status(F, ctx.depth + 1);
    if (fs->level == BmLevel::Unknown)
      return nullptr;
    t->level = worst(t->level, fs->level);
    t->premises.push_back({"factor", F, fs});
  }
  t->witness.factors = dec.factors;
  return t;
}

TracePtr Engine::theorem11(Context &ctx)
{
  PermGroup const &G = ctx.G;
  std::shared_ptr<ProofTrace> best;
  for (auto const &N : ctx.normals()) {
    if (N.is_trivial() || !is_power_product_order(N.order()))
      continue;
    PermGroup NG = N.as_group();
    if (!center(NG).is_trivial())
      continue;
    auto shape = recognize_symmetric_or_A5_power_product(NG);
    if (!shape)
      continue;
    auto q = quotient(G, N);
    TracePtr qs = sub_status(q.quotient, ctx.depth + 1);
    if (qs->level == BmLevel::Unknown || (best && qs->level >= best->level))
      continue;
    best = make_trace(Rule::Theorem11, qs->level, G);
    best->premises.push_back({"quotient", q.quotient, qs});
    best->witness.kernel = N;
    best->witness.shape = *shape;
    if (best->level == BmLevel::Unconditional)
      break;
  }
  return best;
}

TracePtr Engine::tool_b(Context &ctx)
{
  PermGroup const &G = ctx.G;
  std::shared_ptr<ProofTrace> best;
  for (auto &w : tool_b_candidates(G, ctx.normals(), _config.tool_b_central)) {
    PermGroup E = w.E.as_group();
    TracePtr es = sub_status(E, ctx.depth + 1);
    if (es->level == BmLevel::Unknown || (best && es->level >= best->level))
      continue;
    best = make_trace(Rule::ToolB, es->level, G);
    best->premises.push_back({"preimage", E, es});
    best->witness.kernel = w.V;
    best->witness.preimage = w.E;
    best->witness.n = w.n;
    if (best->level == BmLevel::Unconditional)
      break;
  }
  return best;
}

TracePtr Engine::theorem12(Context &ctx)
{
  PermGroup const &G = ctx.G;
  for (auto const &N : ctx.normals()) {
    if (N.order() < 4u || N.order() % 2u != 0u)
      continue;
    PermGroup NG = N.as_group();
    if (derived_subgroup(NG).order() != 2u)
      continue;
    auto q = quotient(G, N);
    TracePtr qs = sub_status(q.quotient, ctx.depth + 1);
    auto t = make_trace(Rule::Theorem12, BmLevel::UnderSchinzelH, G);
    t->witness.kernel = N;
    if (is_supersolvable(q.quotient)) {
      t->witness.note = "supersolvable quotient";
    } else {
      if (qs->level == BmLevel::Unknown)
        continue;
      auto K = find_complement(G, N);
      if (!K)
        continue;
      t->witness.note = "split";
      t->witness.complement = *K;
    }
    t->premises.push_back({"quotient", q.quotient, qs});
    return t;
  }
  return nullptr;
}

TracePtr Engine::base_status(PermGroup const &G)
{
  Context ctx{G, 0, std::nullopt};
  return base(ctx);
}

TracePtr Engine::rule_toolA(PermGroup const &G)
{
  Context ctx{G, 0, std::nullopt};
  return tool_a(ctx);
}

TracePtr Engine::rule_toolC(PermGroup const &G)
{
  Context ctx{G, 0, std::nullopt};
  return tool_c(ctx);
}

TracePtr Engine::rule_theorem11(PermGroup const &G)
{
  Context ctx{G, 0, std::nullopt};
  return theorem11(ctx);
}

TracePtr Engine::rule_toolB(PermGroup const &G)
{
  Context ctx{G, 0, std::nullopt};
  return tool_b(ctx);
}

TracePtr Engine::rule_theorem12(PermGroup const &G)
{
  Context ctx{G, 0, std::nullopt};
  return theorem12(ctx);
}

std::vector<Premise> Engine::tool_b_reverse(PermGroup const &G)
{
  std::vector<Premise> out;
  if (!_config.tool_b_reverse)
    return out;
  for (auto &w : tool_b_candidates(G, normal_subgroups(G), _config.tool_b_central)) {
    PermGroup E = w.E.as_group();
    out.push_back({"preimage", E, status(E)});
  }
  return out;
}

namespace
{

bool fail(std::string *why, std::string msg)
{
  if (why)
    *why = std::move(msg);
  return false;
}

bool same_level(Engine &engine, Premise const &p, std::string *why)
{
  BmLevel now = engine.status(p.group)->level;
  if (now != p.level())
    return fail(why, std::string("premise (") + p.role + ") recorded " + to_string(p.level()) +
                         ", recomputed " + to_string(now));
  return true;
}

bool quotient_matches(PermGroup const &G, Subgroup const &N, Premise const &p)
{
  if (!is_normal(G, N))
    return false;
  auto q = quotient(G, N);
  return q.quotient.order() == p.group.order() && are_isomorphic(q.quotient, p.group);
}

} // namespace

bool replay(ProofTrace const &t, Engine &engine, std::string *why)
{
  PermGroup const &G = t.group;
  auto const &w = t.witness;
  auto one_premise = [&]() -> Premise const * {
    return t.premises.size() == 1u ? &t.premises.front() : nullptr;
  };

  switch (t.rule) {
  case Rule::None: {
    BmLevel now = engine.classify(G)->level;
    if (t.level != BmLevel::Unknown || now != BmLevel::Unknown)
      return fail(why, "no rule recorded but group is not Unknown");
    return true;
  }
  case Rule::Reminder:
    if (t.level != BmLevel::Unconditional || !are_isomorphic(G, named_group(w.note)))
      return fail(why, "not isomorphic to " + w.note);
    return true;
  case Rule::ToolD:
    if (t.level != BmLevel::Unconditional || !is_supersolvable(G))
      return fail(why, "not supersolvable");
    return true;
  case Rule::ToolA: {
    auto p = one_premise();
    if (!p || !w.kernel || !w.complement)
      return fail(why, "tool A trace incomplete");
    if (!is_abelian(w.kernel->as_group()) || w.kernel->is_trivial())
      return fail(why, "tool A kernel not a nontrivial abelian subgroup");
    if (!is_complement(*w.complement, *w.kernel))
      return fail(why, "tool A complement invalid");
    if (!quotient_matches(G, *w.kernel, *p))
      return fail(why, "tool A quotient mismatch");
    if (!same_level(engine, *p, why))
      return false;
    if (t.level != p->level() || t.level == BmLevel::Unknown)
      return fail(why, "tool A conclusion differs from premise");
    break;
  }
  case Rule::ToolC: {
    if (w.factors.size() < 2u || w.factors.size() != t.premises.size())
      return fail(why, "tool C trace incomplete");
    std::size_t prod = 1;
    Subgroup acc = trivial_subgroup(G);
    BmLevel lvl = BmLevel::Unconditional;
    for (std::size_t i = 0; i < w.factors.size(); ++i) {
      auto const &f = w.factors[i];
      if (!is_normal(G, f) || !intersection(acc, f).is_trivial())
        return fail(why, "tool C factors not a direct decomposition");
      acc = join(acc, f);
      prod *= f.order();
      if (!are_isomorphic(f.as_group(), t.premises[i].group))
        return fail(why, "tool C factor mismatch");
      if (!same_level(engine, t.premises[i], why))
        return false;
      lvl = worst(lvl, t.premises[i].level());
    }
    if (prod != G.order() || lvl != t.level || lvl == BmLevel::Unknown)
      return fail(why, "tool C conclusion differs from factors");
    break;
  }
  case Rule::Theorem11: {
    auto p = one_premise();
    if (!p || !w.kernel || !w.shape)
      return fail(why, "theorem 1.1 trace incomplete");
    auto shape = recognize_symmetric_or_A5_power_product(w.kernel->as_group());
    if (w.kernel->is_trivial() || !shape || *shape != *w.shape)
      return fail(why, "theorem 1.1 kernel not recognized");
    if (!quotient_matches(G, *w.kernel, *p))
      return fail(why, "theorem 1.1 quotient mismatch");
    if (!same_level(engine, *p, why))
      return false;
    if (t.level != p->level() || t.level == BmLevel::Unknown)
      return fail(why, "theorem 1.1 conclusion differs from premise");
    break;
  }
  case Rule::ToolB: {
    auto p = one_premise();
    if (!p || !w.kernel || !w.preimage)
      return fail(why, "tool B trace incomplete");
    Subgroup const &V = *w.kernel;
    if (V.is_trivial() || !is_elementary_abelian_2(V) || !is_normal(G, V))
      return fail(why, "tool B kernel not a normal elementary abelian 2-subgroup");
    if (engine.config().tool_b_central && !is_central(V))
      return fail(why, "tool B kernel not central");
    if (w.n < 3u || w.n % 2u == 0u)
      return fail(why, "tool B degree not odd");
    auto q = quotient(G, V);
    if (symmetric_degree(q.quotient) != std::optional<unsigned>(w.n))
      return fail(why, "tool B quotient not symmetric of the recorded degree");
    Subgroup const &E = *w.preimage;
    if (E.index() != w.n || intersection(E, V).order() != V.order())
      return fail(why, "tool B preimage has wrong index");
    auto qe = q.image(E).as_group();
    if (symmetric_degree(qe) != std::optional<unsigned>(w.n - 1))
      return fail(why, "tool B preimage image is not S_(n-1)");
    if (!are_isomorphic(E.as_group(), p->group))
      return fail(why, "tool B premise mismatch");
    if (!same_level(engine, *p, why))
      return false;
    if (t.level != p->level() || t.level == BmLevel::Unknown)
      return fail(why, "tool B conclusion differs from premise");
    break;
  }
  case Rule::Theorem12: {
    auto p = one_premise();
    if (!p || !w.kernel)
      return fail(why, "theorem 1.2 trace incomplete");
    if (derived_subgroup(w.kernel->as_group()).order() != 2u)
      return fail(why, "theorem 1.2 kernel derived subgroup is not C2");
    if (!quotient_matches(G, *w.kernel, *p))
      return fail(why, "theorem 1.2 quotient mismatch");
    if (!is_supersolvable(p->group)) {
      if (!w.complement || !is_complement(*w.complement, *w.kernel))
        return fail(why, "theorem 1.2 needs a complement");
      if (!same_level(engine, *p, why))
        return false;
      if (p->level() == BmLevel::Unknown)
        return fail(why, "theorem 1.2 quotient unknown");
    }
    if (t.level != BmLevel::UnderSchinzelH)
      return fail(why, "theorem 1.2 conclusion must be conditional");
    break;
  }
  }

  for (auto const &p : t.premises)
    if (p.trace && !replay(*p.trace, engine, why))
      return false;
  return true;
}

std::set<GroupId> conditional_sources(ProofTrace const &trace, Database const &db)
{
  std::set<GroupId> out;
  for (auto const &p : trace.premises) {
    if (p.level() != BmLevel::UnderSchinzelH)
      continue;
    if (p.trace->rule == Rule::Theorem12) {
      if (auto id = identify(p.group, db))
        out.insert(*id);
    } else {
      out.merge(conditional_sources(*p.trace, db));
    }
  }
  return out;
}

unsigned worker_threads()
{
  if (char const *env = std::getenv("BMCLASS_THREADS")) {
    char *end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v > 0)
      return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

Report classify_database(Database const &db, ClassifyFilter const &filter, Engine &engine)
{
  Report report;
  report.assume_schinzel = engine.config().assume_schinzel;

  auto in_range = [&](unsigned order) { return filter.max_order == 0u || order <= filter.max_order; };

  std::vector<GroupRecord const *> todo;
  for (auto const &rec : db.records()) {
    if (!in_range(rec.id().order))
      continue;
    if (filter.solvable != SolvableFilter::All) {
      bool solv = rec.flags().solvable ? *rec.flags().solvable : is_solvable(rec.group());
      if (solv != (filter.solvable == SolvableFilter::Only))
        continue;
    }
    todo.push_back(&rec);
  }
  std::sort(todo.begin(), todo.end(),
            [](auto const *a, auto const *b) { return a->id() < b->id(); });

  report.rows.resize(todo.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= todo.size())
        return;
      try {
        auto const &rec = *todo[i];
        TracePtr t = engine.classify(rec.group());
        report.rows[i] = {rec.id(), rec.name(), t->level, t};
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error)
          error = std::current_exception();
        next = todo.size();
      }
    }
  };
  unsigned n = std::min<std::size_t>(worker_threads(), std::max<std::size_t>(todo.size(), 1));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < n; ++i)
    pool.emplace_back(work);
  work();
  for (auto &th : pool)
    th.join();
  if (error)
    std::rethrow_exception(error);

  if (filter.solvable != SolvableFilter::Exclude)
    for (auto const &[order, count] : db.nilpotent_tally())
      if (in_range(order))
        report.nilpotent.push_back({order, count});
  return report;
}

} // namespace bmclass
