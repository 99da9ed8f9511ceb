#ifndef BMCLASS_REPORT_HPP
#define BMCLASS_REPORT_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "bmclass/database.hpp"
#include "bmclass/engine.hpp"

namespace bmclass
{

enum class ReportFormat
{
  Tsv,
  Json,
};

/// A report row as displayed. Without Schinzel reporting a conditional
/// result shows as Unknown with no rule and no premises.
struct DisplayRow
{
  unsigned order = 0;
  std::string id;
  std::string name;
  std::string status;
  std::string rule;
  /// `;`-separated premise labels, or "-".
  std::string premises;
};

BmLevel reported_level(BmLevel level, bool assume_schinzel);

/// Database ID of the group if `db` knows it, else a structural label
/// ("C6", a base group name, or "order:N").
std::string group_label(PermGroup const &G, TracePtr const &trace, Database const *db);

DisplayRow display_row(ReportRow const &row, bool assume_schinzel, Database const *db);

/// Header `order id name status rule premise-ids`, one row per record, then
/// one `# nilpotent ...` line per synthesized count.
void emit_report(std::ostream &out, Report const &report, ReportFormat format,
                 Database const *db = nullptr);

/// Rows as `order | id | name | status | rule | premise-ids`, no header.
void emit_table(std::ostream &out, std::vector<DisplayRow> const &rows);

/// Indented multi-line rendering of a trace and its premises.
void emit_trace(std::ostream &out, ProofTrace const &trace, Database const *db,
                std::string const &label, unsigned indent = 0);

} // namespace bmclass

#endif // BMCLASS_REPORT_HPP
