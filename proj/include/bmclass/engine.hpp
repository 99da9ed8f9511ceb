#ifndef BMCLASS_ENGINE_HPP
#define BMCLASS_ENGINE_HPP

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bmclass/catalog.hpp"
#include "bmclass/database.hpp"
#include "bmclass/perm_group.hpp"

namespace bmclass
{

/// Ordered: Unconditional < UnderSchinzelH < Unknown.
enum class BmLevel
{
  Unconditional = 0,
  UnderSchinzelH = 1,
  Unknown = 2,
};

char const *to_string(BmLevel level);

inline BmLevel worst(BmLevel a, BmLevel b) { return a < b ? b : a; }

enum class Rule
{
  None,
  Reminder,  // known rational fields of invariants
  ToolD,     // supersolvable
  ToolA,     // split extension by an abelian kernel
  ToolC,     // direct products
  Theorem11, // kernel A5^t0 x prod S_ni^ti
  ToolB,     // central C2^r cover of S_n, n odd
  Theorem12, // kernel with derived subgroup C2 (conditional)
};

/// Short tag used in reports: "-", "Reminder", "D", "A", "C", "Thm1.1", "B", "Thm1.2".
char const *rule_tag(Rule rule);
std::optional<Rule> parse_rule_tag(std::string const &tag);

struct ProofTrace;
using TracePtr = std::shared_ptr<ProofTrace const>;

struct Premise
{
  /// "quotient", "factor" or "preimage".
  std::string role;
  PermGroup group;
  TracePtr trace;

  BmLevel level() const;
};

struct Witness
{
  std::optional<Subgroup> kernel;
  std::optional<Subgroup> complement;
  std::optional<Subgroup> preimage;
  std::vector<Subgroup> factors;
  std::optional<PowerProductShape> shape;
  unsigned n = 0;
  /// Base group name or Theorem 1.2 branch.
  std::string note;
};

struct ProofTrace
{
  Rule rule = Rule::None;
  BmLevel level = BmLevel::Unknown;
  PermGroup group;
  std::vector<Premise> premises;
  Witness witness;
};

struct RuleConfig
{
  /// Reporting only: without it UnderSchinzelH is displayed as Unknown.
  bool assume_schinzel = false;
  /// Order in which the non-base rules are tried; ties keep the earliest.
  std::vector<Rule> order{Rule::ToolA, Rule::ToolC, Rule::Theorem11, Rule::ToolB, Rule::Theorem12};
  std::set<Rule> disabled;
  unsigned depth_cap = 64;
  /// Lets the explain command also report Tool B's reverse direction.
  bool tool_b_reverse = false;
  /// Tool B only over kernels inside the center. Off by default: the
  /// 480,953 -> 96,190 reduction uses a non-central C2^2 kernel.
  bool tool_b_central = false;

  bool enabled(Rule r) const { return disabled.count(r) == 0u; }
};

/**
 * Rule closure with a memo shared by every classification made through the
 * same engine. The memo is keyed by fingerprint and resolved by isomorphism
 * tests, so a stored result is reused for any presentation of the group.
 */
class Engine
{
public:
  explicit Engine(RuleConfig config = {});

  RuleConfig const &config() const { return _config; }

  /// Full classification on this presentation of G; the trace's witnesses
  /// refer to G's own elements. Premise statuses come from the memo.
  TracePtr classify(PermGroup const &G);

  /// Memoized status of G (trace possibly on another presentation).
  TracePtr status(PermGroup const &G);

  TracePtr base_status(PermGroup const &G);
  TracePtr rule_toolA(PermGroup const &G);
  TracePtr rule_toolC(PermGroup const &G);
  TracePtr rule_theorem11(PermGroup const &G);
  TracePtr rule_toolB(PermGroup const &G);
  TracePtr rule_theorem12(PermGroup const &G);

  /// Tool B read backwards: for every admissible (V, E) in G, the group E
  /// whose status G's status decides.
  std::vector<Premise> tool_b_reverse(PermGroup const &G);

  std::size_t memo_size() const;

private:
  struct Context;
  struct MemoEntry
  {
    PermGroup rep;
    TracePtr trace;
  };

  TracePtr compute(PermGroup const &G, unsigned depth);
  TracePtr sub_status(PermGroup const &H, unsigned depth);
  TracePtr run_rule(Rule rule, Context &ctx);

  TracePtr base(Context &ctx);
  TracePtr tool_a(Context &ctx);
  TracePtr tool_c(Context &ctx);
  TracePtr theorem11(Context &ctx);
  TracePtr tool_b(Context &ctx);
  TracePtr theorem12(Context &ctx);

  RuleConfig _config;
  mutable std::mutex _mutex;
  std::map<Fingerprint, std::vector<MemoEntry>> _memo;
};

/// Recomputes every structural fact and premise status in the trace, and
/// its premises' traces. Returns false on the first disagreement, with a
/// reason in `why`.
bool replay(ProofTrace const &trace, Engine &engine, std::string *why = nullptr);

/// Records (by ID) at which the conditional level enters the trace: the
/// UnderSchinzelH premises derived by Theorem 1.2, followed transitively
/// through premises of other rules.
std::set<GroupId> conditional_sources(ProofTrace const &trace, Database const &db);

enum class SolvableFilter
{
  All,
  Only,
  Exclude,
};

struct ClassifyFilter
{
  unsigned max_order = 0; // 0 = no limit
  SolvableFilter solvable = SolvableFilter::All;
};

struct ReportRow
{
  GroupId id;
  std::string name;
  BmLevel level = BmLevel::Unknown;
  TracePtr trace;
};

struct SynthesizedCount
{
  unsigned order;
  std::size_t count;
};

struct Report
{
  bool assume_schinzel = false;
  std::vector<ReportRow> rows;
  /// Nilpotent groups counted, not shipped: all Unconditional by Tool D.
  std::vector<SynthesizedCount> nilpotent;
};

/// Number of worker threads: BMCLASS_THREADS if set, else all cores.
unsigned worker_threads();

Report classify_database(Database const &db, ClassifyFilter const &filter, Engine &engine);

} // namespace bmclass

#endif // BMCLASS_ENGINE_HPP
