#include <algorithm>
#include <cctype>
#include <fstream>
#include <mutex>
#include <sstream>

#include "bmclass/database.hpp"
#include "bmclass/errors.hpp"
#include "bmclass/structure.hpp"

namespace bmclass
{

namespace
{

std::vector<std::string> split(std::string_view s, char sep)
{
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    auto end = s.find(sep, start);
    if (end == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      return out;
    }
    out.emplace_back(s.substr(start, end - start));
    start = end + 1;
  }
}

std::string trim(std::string_view s)
{
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a])))
    ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1])))
    --b;
  return std::string(s.substr(a, b - a));
}

std::optional<unsigned> to_uint(std::string_view s)
{
  if (s.empty() || s.size() > 9)
    return std::nullopt;
  unsigned v = 0;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c)))
      return std::nullopt;
    v = v * 10u + static_cast<unsigned>(c - '0');
  }
  return v;
}

unsigned positive_field(std::string const &text, std::size_t line, char const *what)
{
  auto v = to_uint(trim(text));
  if (!v || *v == 0u)
    throw ParseError(line, std::string("invalid ") + what + " '" + text + "'");
  return *v;
}

// key=value pairs after the pragma keyword
std::map<std::string, unsigned> pragma_args(std::vector<std::string> const &words,
                                            std::size_t line)
{
  std::map<std::string, unsigned> out;
  for (std::size_t i = 1; i < words.size(); ++i) {
    if (words[i].empty())
      continue;
    auto eq = words[i].find('=');
    if (eq == std::string::npos)
      throw ParseError(line, "malformed pragma argument '" + words[i] + "'");
    auto v = to_uint(words[i].substr(eq + 1));
    if (!v)
      throw ParseError(line, "malformed pragma value '" + words[i] + "'");
    out[words[i].substr(0, eq)] = *v;
  }
  return out;
}

GroupFlags parse_flags(std::string const &text, std::size_t line)
{
  GroupFlags f;
  for (auto const &item : split(text, ',')) {
    auto t = trim(item);
    if (t.empty())
      continue;
    auto eq = t.find('=');
    std::string key = t.substr(0, eq);
    std::string val = eq == std::string::npos ? "" : t.substr(eq + 1);
    if (val != "0" && val != "1")
      throw ParseError(line, "flag value must be 0 or 1");
    if (key == "solvable")
      f.solvable = val == "1";
    else if (key == "nilpotent")
      f.nilpotent = val == "1";
    else
      throw ParseError(line, "unknown flag '" + key + "'");
  }
  return f;
}

} // namespace

std::string GroupId::str() const
{
  return std::to_string(order) + "," + std::to_string(index);
}

GroupId GroupId::parse(std::string_view text)
{
  auto parts = split(text, ',');
  if (parts.size() != 2u)
    throw ParseError(0, "group id must be ORDER,INDEX");
  auto o = to_uint(trim(parts[0])), i = to_uint(trim(parts[1]));
  if (!o || !i || *o == 0u || *i == 0u)
    throw ParseError(0, "group id must be ORDER,INDEX");
  return {*o, *i};
}

struct GroupRecord::Lazy
{
  std::once_flag once;
  PermGroup group;
};

GroupRecord::GroupRecord(GroupId id, std::string name, unsigned degree, std::vector<Perm> gens,
                         GroupFlags flags)
: _id(id), _name(std::move(name)), _degree(degree), _gens(std::move(gens)), _flags(flags),
  _lazy(std::make_shared<Lazy>())
{}

PermGroup const &GroupRecord::group() const
{
  std::call_once(_lazy->once, [this] {
    _lazy->group = close_generators(_degree, _gens,
                                    std::max<std::size_t>(_id.order, PermGroup::default_cap));
  });
  return _lazy->group;
}

std::string GroupRecord::line() const
{
  std::string s = std::to_string(_id.order) + "|" + std::to_string(_id.index) + "|" +
                  std::to_string(_degree) + "|" + _name + "|";
  for (std::size_t i = 0; i < _gens.size(); ++i) {
    if (i)
      s += ';';
    s += _gens[i].to_cycles();
  }
  if (_flags.solvable || _flags.nilpotent) {
    s += '|';
    bool first = true;
    if (_flags.solvable) {
      s += std::string("solvable=") + (*_flags.solvable ? "1" : "0");
      first = false;
    }
    if (_flags.nilpotent)
      s += std::string(first ? "" : ",") + "nilpotent=" + (*_flags.nilpotent ? "1" : "0");
  }
  return s;
}

GroupRecord const *Database::find(GroupId id) const
{
  auto it = _index.find(id);
  return it == _index.end() ? nullptr : &_records[it->second];
}

std::vector<GroupRecord const *> Database::of_order(unsigned order) const
{
  std::vector<GroupRecord const *> out;
  for (auto it = _index.lower_bound({order, 0}); it != _index.end() && it->first.order == order; ++it)
    out.push_back(&_records[it->second]);
  return out;
}

bool Database::covers(unsigned order) const
{
  return _coverage.count(order) != 0u;
}

void Database::add(GroupRecord rec, std::size_t line)
{
  if (_index.count(rec.id()))
    throw DuplicateId("duplicate group id " + rec.id().str() +
                      (line ? " on line " + std::to_string(line) : std::string()));
  _index.emplace(rec.id(), _records.size());
  _records.push_back(std::move(rec));
}

void Database::add_nilpotent_tally(unsigned order, std::size_t count)
{
  _nilpotent[order] += count;
}

void Database::merge(Database const &other)
{
  for (auto const &r : other._records)
    add(r);
  for (unsigned o : other._coverage)
    _coverage.insert(o);
  for (auto const &[o, c] : other._nilpotent)
    add_nilpotent_tally(o, c);
}

Database parse_database(std::istream &in, LoadOptions const &opts)
{
  Database db;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (!raw.empty() && raw.back() == '\r')
      raw.pop_back();
    std::string text = trim(raw);
    if (text.empty() || text[0] == '#')
      continue;

    if (text[0] == '!') {
      auto words = split(text.substr(1), ' ');
      auto args = pragma_args(words, line);
      if (words[0] == "complete" && args.size() == 1u && args.count("order")) {
        db.declare_complete(args["order"]);
      } else if (words[0] == "nilpotent" && args.size() == 2u && args.count("order") &&
                 args.count("count")) {
        db.add_nilpotent_tally(args["order"], args["count"]);
      } else {
        throw ParseError(line, "unknown pragma '" + text + "'");
      }
      continue;
    }

    auto fields = split(text, '|');
    if (fields.size() != 5u && fields.size() != 6u)
      throw ParseError(line, "expected 5 fields, found " + std::to_string(fields.size()));

    unsigned order = positive_field(fields[0], line, "order");
    unsigned index = positive_field(fields[1], line, "index");
    unsigned degree = positive_field(fields[2], line, "degree");
    if (degree > 65535u)
      throw ParseError(line, "degree too large");

    std::vector<Perm> gens;
    try {
      gens = parse_generators(degree, fields[4]);
    } catch (InvalidPermutation const &e) {
      throw ParseError(line, e.what());
    }
    GroupFlags flags = fields.size() == 6u ? parse_flags(fields[5], line) : GroupFlags{};

    GroupRecord rec({order, index}, trim(fields[3]), degree, std::move(gens), flags);

    if (!opts.trust) {
      std::size_t computed;
      try {
        computed = close_generators(degree, rec.generators(), order).order();
      } catch (ElementCapExceeded const &) {
        throw OrderMismatch("group " + rec.id().str() + " on line " + std::to_string(line) +
                            ": stated order " + std::to_string(order) +
                            ", generators close to a larger group");
      }
      if (computed != order)
        throw OrderMismatch("group " + rec.id().str() + " on line " + std::to_string(line) +
                            ": stated order " + std::to_string(order) + ", computed " +
                            std::to_string(computed));
    }

    if (opts.strict) {
      PermGroup const &G = rec.group();
      if (flags.solvable && *flags.solvable != is_solvable(G))
        throw DataError("group " + rec.id().str() + ": solvable flag does not match");
      if (flags.nilpotent && *flags.nilpotent != is_nilpotent(G))
        throw DataError("group " + rec.id().str() + ": nilpotent flag does not match");
    }

    db.add(std::move(rec), line);
  }
  return db;
}

Database parse_database(std::string_view text, LoadOptions const &opts)
{
  std::istringstream in{std::string(text)};
  return parse_database(in, opts);
}

Database load_database(std::string const &path, LoadOptions const &opts)
{
  std::ifstream in(path);
  if (!in)
    throw DataError("cannot open database '" + path + "'");
  return parse_database(in, opts);
}

Database load_databases(std::vector<std::string> const &paths, LoadOptions const &opts)
{
  Database db;
  for (auto const &p : paths)
    db.merge(load_database(p, opts));
  return db;
}

void write_database(std::ostream &out, Database const &db)
{
  for (unsigned o : db.coverage())
    out << "!complete order=" << o << '\n';
  for (auto const &[o, c] : db.nilpotent_tally())
    out << "!nilpotent order=" << o << " count=" << c << '\n';
  for (auto const &r : db.records())
    out << r.line() << '\n';
}

} // namespace bmclass
