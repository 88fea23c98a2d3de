#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "rcms/certmodel.hpp"
#include "rcms/codegen.hpp"
#include "rcms/errors.hpp"

namespace rcms {

// 802.11 network name: raw octets, compared byte-exact. Not necessarily
// printable or UTF-8.
struct Ssid {
  std::string octets;

  static Ssid from_string(std::string_view s) { return Ssid{std::string(s)}; }
  auto operator<=>(const Ssid&) const = default;

  // Printable SSIDs verbatim, anything else as "base64:...." for UI text.
  std::string display() const;
};

struct TrustEntry {
  Ssid ssid;
  Bytes root_public_key;
  Fingerprint root_fingerprint;
  std::string root_cert_path;  // relative to the store file's directory
  UtcTime first_seen = 0;
  UtcTime updated_at = 0;
};

class CorruptStoreError : public ParseError {
 public:
  using ParseError::ParseError;
};

class NoSuchEntryError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class SeamlessOutcome {
  Updated,    // same key, new certificate stored
  Unchanged,  // identical certificate, nothing to do
  Refused,    // different public key; only pairing with a code may change it
};

// One entry per SSID: the pinned root CA, its fingerprint, and a copy of the
// certificate on disk. Writes are atomic; a failed write leaves both the file
// and the in-memory state untouched.
class TrustStore {
 public:
  // Missing file opens an empty store; a damaged one throws CorruptStoreError
  // (cross-field checks included: the stored certificate must re-hash to the
  // recorded fingerprint and carry the recorded public key).
  static TrustStore open(std::filesystem::path file);

  const TrustEntry* lookup(const Ssid& ssid) const;

  // Records or replaces the pin for an SSID. Only called after the user's
  // verification code matched.
  void pin(const Ssid& ssid, const Certificate& root, UtcTime now);

  // Certificate renewal under an unchanged public key. Throws
  // NoSuchEntryError when the SSID has no pin.
  SeamlessOutcome seamless_update(const Ssid& ssid, const Certificate& new_root, UtcTime now);

  Certificate stored_root(const TrustEntry& entry) const;

  const std::map<Ssid, TrustEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  const std::filesystem::path& file_path() const { return file_; }

 private:
  explicit TrustStore(std::filesystem::path file) : file_(std::move(file)) {}

  void persist(std::map<Ssid, TrustEntry> next) const;
  std::filesystem::path resolve(const std::string& rel) const;

  std::filesystem::path file_;
  std::map<Ssid, TrustEntry> entries_;
};

struct StoredCredentials {
  Ssid ssid;
  std::string username;
  Password password;
};

// Saved username/password per SSID. Stored as plain JSON: the model needs
// recallable passwords (the verification code is keyed by them), matching
// how wpa_supplicant configs store credentials in practice.
class CredentialsStore {
 public:
  static CredentialsStore open(std::filesystem::path file);

  const StoredCredentials* lookup(const Ssid& ssid) const;
  void store(const Ssid& ssid, std::string username, Password password);

  const std::map<Ssid, StoredCredentials>& entries() const { return entries_; }
  const std::filesystem::path& file_path() const { return file_; }

 private:
  explicit CredentialsStore(std::filesystem::path file) : file_(std::move(file)) {}

  void persist() const;

  std::filesystem::path file_;
  std::map<Ssid, StoredCredentials> entries_;
};

}  // namespace rcms
