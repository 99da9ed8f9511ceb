#include "bmclass/report.hpp"

#include <ostream>

#include "json.hpp"

#include "bmclass/catalog.hpp"
#include "bmclass/errors.hpp"
#include "bmclass/structure.hpp"

namespace bmclass
{

BmLevel reported_level(BmLevel level, bool assume_schinzel)
{
  if (level == BmLevel::UnderSchinzelH && !assume_schinzel)
    return BmLevel::Unknown;
  return level;
}

std::string group_label(PermGroup const &G, TracePtr const &trace, Database const *db)
{
  if (db) {
    try {
      if (auto id = identify(G, *db))
        return id->str();
    } catch (OrderNotInDatabase const &) {
    }
  }
  if (is_abelian(G) && G.order() > 1u) {
    std::string s;
    for (auto d : abelian_invariants(G))
      s += (s.empty() ? "C" : "xC") + std::to_string(d);
    return s;
  }
  if (trace && trace->rule == Rule::Reminder)
    return trace->witness.note;
  return "order:" + std::to_string(G.order());
}

DisplayRow display_row(ReportRow const &row, bool assume_schinzel, Database const *db)
{
  DisplayRow d;
  d.order = row.id.order;
  d.id = row.id.str();
  d.name = row.name;
  BmLevel shown = reported_level(row.level, assume_schinzel);
  d.status = to_string(shown);
  if (shown != row.level || !row.trace) {
    d.rule = "-";
    d.premises = "-";
    return d;
  }
  d.rule = rule_tag(row.trace->rule);
  for (auto const &p : row.trace->premises) {
    if (!d.premises.empty())
      d.premises += ';';
    d.premises += group_label(p.group, p.trace, db);
  }
  if (d.premises.empty())
    d.premises = "-";
  return d;
}

void emit_report(std::ostream &out, Report const &report, ReportFormat format, Database const *db)
{
  std::vector<DisplayRow> rows;
  for (auto const &r : report.rows)
    rows.push_back(display_row(r, report.assume_schinzel, db));

  if (format == ReportFormat::Json) {
    nlohmann::ordered_json j;
    j["assume_schinzel"] = report.assume_schinzel;
    j["rows"] = nlohmann::ordered_json::array();
    for (auto const &d : rows)
      j["rows"].push_back({{"order", d.order}, {"id", d.id}, {"name", d.name},
                           {"status", d.status}, {"rule", d.rule}, {"premise-ids", d.premises}});
    j["nilpotent"] = nlohmann::ordered_json::array();
    for (auto const &n : report.nilpotent)
      j["nilpotent"].push_back({{"order", n.order}, {"count", n.count},
                                {"status", "Unconditional"}, {"rule", "D"}});
    out << j.dump(2) << '\n';
    return;
  }

  out << "order\tid\tname\tstatus\trule\tpremise-ids\n";
  for (auto const &d : rows)
    out << d.order << '\t' << d.id << '\t' << d.name << '\t' << d.status << '\t' << d.rule
        << '\t' << d.premises << '\n';
  for (auto const &n : report.nilpotent)
    out << "# nilpotent order=" << n.order << " count=" << n.count
        << " status=Unconditional rule=D\n";
}

void emit_table(std::ostream &out, std::vector<DisplayRow> const &rows)
{
  for (auto const &d : rows)
    out << d.order << " | " << d.id << " | " << d.name << " | " << d.status << " | " << d.rule
        << " | " << d.premises << '\n';
}

namespace
{

std::string witness_text(ProofTrace const &t)
{
  auto const &w = t.witness;
  std::string s;
  auto add = [&](std::string part) {
    s += s.empty() ? " [" : ", ";
    s += part;
  };
  switch (t.rule) {
  case Rule::Reminder:
    add(w.note);
    break;
  case Rule::ToolA:
    add("abelian kernel of order " + std::to_string(w.kernel->order()));
    add("complement of order " + std::to_string(w.complement->order()));
    break;
  case Rule::ToolC:
    add(std::to_string(w.factors.size()) + " factors");
    break;
  case Rule::Theorem11: {
    std::string k = "kernel A5^" + std::to_string(w.shape->t0);
    for (auto const &[n, e] : w.shape->symmetric)
      k += " x S" + std::to_string(n) + "^" + std::to_string(e);
    add(k);
    break;
  }
  case Rule::ToolB:
    add("V of order " + std::to_string(w.kernel->order()));
    add("n = " + std::to_string(w.n));
    add("E of order " + std::to_string(w.preimage->order()));
    break;
  case Rule::Theorem12:
    add("kernel of order " + std::to_string(w.kernel->order()));
    add(w.note);
    break;
  default:
    break;
  }
  return s.empty() ? s : s + "]";
}

} // namespace

void emit_trace(std::ostream &out, ProofTrace const &trace, Database const *db,
                std::string const &label, unsigned indent)
{
  out << std::string(2 * indent, ' ') << label << ": " << to_string(trace.level);
  if (trace.rule != Rule::None)
    out << " by " << rule_tag(trace.rule) << witness_text(trace);
  out << '\n';
  for (auto const &p : trace.premises)
    emit_trace(out, *p.trace, db, p.role + " " + group_label(p.group, p.trace, db), indent + 1);
}

} // namespace bmclass
