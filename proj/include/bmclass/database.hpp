#ifndef BMCLASS_DATABASE_HPP
#define BMCLASS_DATABASE_HPP

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "bmclass/perm_group.hpp"

namespace bmclass
{

/// SmallGroup numbering: `order,index`.
struct GroupId
{
  unsigned order = 0;
  unsigned index = 0;

  auto operator<=>(GroupId const &) const = default;

  std::string str() const;
  /// Accepts `ORDER,INDEX`; throws ParseError (line 0) otherwise.
  static GroupId parse(std::string_view text);
};

struct GroupFlags
{
  std::optional<bool> solvable;
  std::optional<bool> nilpotent;
};

class GroupRecord
{
public:
  GroupRecord(GroupId id, std::string name, unsigned degree, std::vector<Perm> gens,
              GroupFlags flags = {});

  GroupId const &id() const { return _id; }
  std::string const &name() const { return _name; }
  unsigned degree() const { return _degree; }
  std::vector<Perm> const &generators() const { return _gens; }
  GroupFlags const &flags() const { return _flags; }

  /// The generated group, closed on first use.
  PermGroup const &group() const;

  /// The record in database syntax, without a trailing newline.
  std::string line() const;

private:
  struct Lazy;

  GroupId _id;
  std::string _name;
  unsigned _degree;
  std::vector<Perm> _gens;
  GroupFlags _flags;
  std::shared_ptr<Lazy> _lazy;
};

struct LoadOptions
{
  /// Skip the closure check on load; groups are closed on first use.
  bool trust = false;
  /// Recompute the optional solvable/nilpotent flags and reject mismatches.
  bool strict = false;
};

class Database
{
public:
  std::vector<GroupRecord> const &records() const { return _records; }
  GroupRecord const *find(GroupId id) const;
  std::vector<GroupRecord const *> of_order(unsigned order) const;

  /// Orders declared complete by `!complete order=N`.
  std::set<unsigned> const &coverage() const { return _coverage; }
  /// Nilpotent groups not shipped as records, from `!nilpotent order=N count=K`.
  std::map<unsigned, std::size_t> const &nilpotent_tally() const { return _nilpotent; }

  bool covers(unsigned order) const;

  void add(GroupRecord rec, std::size_t line = 0);
  void declare_complete(unsigned order) { _coverage.insert(order); }
  void add_nilpotent_tally(unsigned order, std::size_t count);

  /// Adds every record and pragma of `other`; DuplicateId on collisions.
  void merge(Database const &other);

private:
  std::vector<GroupRecord> _records;
  std::map<GroupId, std::size_t> _index;
  std::set<unsigned> _coverage;
  std::map<unsigned, std::size_t> _nilpotent;
};

Database parse_database(std::istream &in, LoadOptions const &opts = {});
Database parse_database(std::string_view text, LoadOptions const &opts = {});
/// Throws DataError if the file cannot be opened.
Database load_database(std::string const &path, LoadOptions const &opts = {});
/// Loads and merges several files in order.
Database load_databases(std::vector<std::string> const &paths, LoadOptions const &opts = {});

/// Writes the database back in file syntax: pragmas first, then records.
void write_database(std::ostream &out, Database const &db);

} // namespace bmclass

#endif // BMCLASS_DATABASE_HPP
