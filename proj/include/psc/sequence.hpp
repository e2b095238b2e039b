#pragma once

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "psc/amino_acids.hpp"
#include "psc/errors.hpp"

namespace psc {

// An uppercase residue string over the 20-letter alphabet, non-empty by
// construction. Whitespace and digits in the raw text are ignored; any other
// character outside the alphabet is noise and rejected.
class ProteinSequence {
 public:
  static ProteinSequence parse(std::string_view text) {
    std::string residues;
    residues.reserve(text.size());
    for (char raw : text) {
      unsigned char u = static_cast<unsigned char>(raw);
      if (std::isspace(u) || std::isdigit(u)) continue;
      char c = static_cast<char>(std::toupper(u));
      if (!is_residue(c)) throw NoiseError(residues.size() + 1, raw);
      residues.push_back(c);
    }
    if (residues.empty()) throw EmptyInput();
    return ProteinSequence(std::move(residues));
  }

  const std::string& residues() const { return residues_; }
  std::size_t size() const { return residues_.size(); }
  char operator[](std::size_t i) const { return residues_[i]; }

  std::vector<ExchangeGroup> exchange_groups() const {
    std::vector<ExchangeGroup> groups;
    groups.reserve(residues_.size());
    for (char c : residues_) groups.push_back(exchange_group(c));
    return groups;
  }

  // "e5e4e1..." rendering of the sequence in the reduced alphabet.
  std::string exchange_rendering() const {
    std::string out;
    out.reserve(residues_.size() * 2);
    for (char c : residues_) out += to_string(exchange_group(c));
    return out;
  }

  bool operator==(const ProteinSequence&) const = default;

 private:
  explicit ProteinSequence(std::string residues) : residues_(std::move(residues)) {}

  std::string residues_;
};

inline ProteinSequence parse_sequence(std::string_view text) {
  return ProteinSequence::parse(text);
}

struct FastaRecord {
  std::string id;
  ProteinSequence sequence;
};

// Minimal FASTA reader: '>' headers, identifier is the first whitespace
// delimited token, sequence lines may wrap. Noise positions are reported
// against the record they occur in.
inline std::vector<FastaRecord> parse_fasta(std::string_view text) {
  std::vector<FastaRecord> records;
  std::string id;
  std::string body;
  bool in_record = false;

  auto flush = [&] {
    if (!in_record) return;
    try {
      records.push_back({id, ProteinSequence::parse(body)});
    } catch (const NoiseError& e) {
      throw NoiseError(e.position, e.character, id);
    } catch (const EmptyInput&) {
      throw FormatError("record '" + id + "' has no sequence data");
    }
    body.clear();
  };

  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos) {
      if (pos > text.size()) break;
      continue;
    }
    if (line[first] == '>') {
      flush();
      std::string_view header = line.substr(first + 1);
      std::size_t start = header.find_first_not_of(" \t");
      if (start == std::string_view::npos) {
        throw FormatError("FASTA header with no identifier");
      }
      std::size_t end = header.find_first_of(" \t", start);
      id = std::string(header.substr(start, end - start));
      in_record = true;
    } else {
      if (!in_record) {
        throw FormatError("FASTA input must start with a '>' header line");
      }
      body.append(line);
    }
    if (pos > text.size()) break;
  }
  flush();
  if (records.empty()) throw FormatError("FASTA input contains no records");
  return records;
}

inline std::vector<FastaRecord> load_fasta_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StorageError("cannot open FASTA file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_fasta(buffer.str());
}

}  // namespace psc
