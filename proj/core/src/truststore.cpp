#include "rcms/truststore.hpp"

#include <nlohmann/json.hpp>

#include "fsutil.hpp"
#include "rcms/crypto.hpp"

namespace rcms {

namespace {

using nlohmann::json;

constexpr int kSchemaVersion = 1;

bool printable(std::string_view s) {
  if (s.empty()) return false;
  for (unsigned char c : s) {
    if (c < 0x20 || c > 0x7e) return false;
  }
  return true;
}

json require(const json& obj, const char* key, json::value_t type, const char* what) {
  // The parser reads non-negative literals back as number_unsigned, so an
  // exact match on number_integer would reject every stored timestamp.
  const bool ok = obj.contains(key) && (type == json::value_t::number_integer
                                            ? obj.at(key).is_number_integer()
                                            : obj.at(key).type() == type);
  if (!ok) {
    throw CorruptStoreError(std::string(what) + ": bad or missing field '" + key + "'");
  }
  return obj.at(key);
}

Bytes require_b64(const json& obj, const char* key, const char* what) {
  const std::string text = require(obj, key, json::value_t::string, what).get<std::string>();
  auto bytes = crypto::base64_decode(text);
  if (!bytes) throw CorruptStoreError(std::string(what) + ": field '" + key + "' is not base64");
  return *std::move(bytes);
}

std::string cert_rel_path(const Fingerprint& fp) {
  return "rootca/" + fp.hex.substr(0, 16) + ".crt";
}

}  // namespace

std::string Ssid::display() const {
  if (printable(octets)) return octets;
  return "base64:" + crypto::base64_encode(view_of(octets));
}

TrustStore TrustStore::open(std::filesystem::path file) {
  TrustStore store(std::move(file));
  auto content = fsutil::read_file(store.file_);
  if (!content) return store;

  json doc = json::parse(*content, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw CorruptStoreError("trust store is not valid JSON: " + store.file_.string());
  }
  if (!doc.contains("schema_version") || doc["schema_version"] != kSchemaVersion) {
    throw CorruptStoreError("trust store schema version mismatch: " + store.file_.string());
  }
  auto entries = require(doc, "entries", json::value_t::array, "trust store");
  for (const json& e : entries) {
    if (!e.is_object()) throw CorruptStoreError("trust store entry is not an object");
    TrustEntry entry;
    entry.ssid.octets = bytes_to_string(require_b64(e, "ssid_b64", "trust store entry"));
    entry.root_public_key = require_b64(e, "root_pubkey_b64", "trust store entry");
    entry.root_fingerprint.hex =
        require(e, "root_fingerprint", json::value_t::string, "trust store entry")
            .get<std::string>();
    entry.root_cert_path =
        require(e, "root_cert_path", json::value_t::string, "trust store entry")
            .get<std::string>();
    entry.first_seen = require(e, "first_seen", json::value_t::number_integer, "trust store entry")
                           .get<UtcTime>();
    entry.updated_at = require(e, "updated_at", json::value_t::number_integer, "trust store entry")
                           .get<UtcTime>();

    Certificate cert;
    try {
      cert = load_certificate_file(store.resolve(entry.root_cert_path));
    } catch (const std::exception& e2) {
      throw CorruptStoreError(std::string("pinned certificate unreadable: ") + e2.what());
    }
    if (fingerprint(cert) != entry.root_fingerprint) {
      throw CorruptStoreError("pinned certificate does not match recorded fingerprint for SSID " +
                              entry.ssid.display());
    }
    if (cert.public_key != entry.root_public_key) {
      throw CorruptStoreError("pinned certificate does not match recorded public key for SSID " +
                              entry.ssid.display());
    }
    if (!store.entries_.emplace(entry.ssid, entry).second) {
      throw CorruptStoreError("duplicate SSID in trust store: " + entry.ssid.display());
    }
  }
  return store;
}

const TrustEntry* TrustStore::lookup(const Ssid& ssid) const {
  auto it = entries_.find(ssid);
  return it == entries_.end() ? nullptr : &it->second;
}

void TrustStore::pin(const Ssid& ssid, const Certificate& root, UtcTime now) {
  TrustEntry entry;
  entry.ssid = ssid;
  entry.root_public_key = root.public_key;
  entry.root_fingerprint = fingerprint(root);
  entry.root_cert_path = cert_rel_path(entry.root_fingerprint);
  auto it = entries_.find(ssid);
  entry.first_seen = (it != entries_.end()) ? it->second.first_seen : now;
  entry.updated_at = now;

  fsutil::write_file_atomic(resolve(entry.root_cert_path), certificate_to_text(root));
  auto next = entries_;
  next.insert_or_assign(ssid, std::move(entry));
  persist(next);
  entries_ = std::move(next);
}

SeamlessOutcome TrustStore::seamless_update(const Ssid& ssid, const Certificate& new_root,
                                            UtcTime now) {
  auto it = entries_.find(ssid);
  if (it == entries_.end()) {
    throw NoSuchEntryError("no trust entry for SSID " + ssid.display());
  }
  if (new_root.public_key != it->second.root_public_key) return SeamlessOutcome::Refused;
  const Fingerprint fp = fingerprint(new_root);
  if (fp == it->second.root_fingerprint) return SeamlessOutcome::Unchanged;

  TrustEntry entry = it->second;
  entry.root_fingerprint = fp;
  entry.root_cert_path = cert_rel_path(fp);
  entry.updated_at = now;

  fsutil::write_file_atomic(resolve(entry.root_cert_path), certificate_to_text(new_root));
  auto next = entries_;
  next.insert_or_assign(ssid, std::move(entry));
  persist(next);
  entries_ = std::move(next);
  return SeamlessOutcome::Updated;
}

Certificate TrustStore::stored_root(const TrustEntry& entry) const {
  return load_certificate_file(resolve(entry.root_cert_path));
}

void TrustStore::persist(std::map<Ssid, TrustEntry> next) const {
  json entries = json::array();
  for (const auto& [ssid, e] : next) {
    entries.push_back({
        {"ssid_b64", crypto::base64_encode(view_of(ssid.octets))},
        {"root_pubkey_b64", crypto::base64_encode(e.root_public_key)},
        {"root_fingerprint", e.root_fingerprint.hex},
        {"root_cert_path", e.root_cert_path},
        {"first_seen", e.first_seen},
        {"updated_at", e.updated_at},
    });
  }
  json doc{{"schema_version", kSchemaVersion}, {"entries", std::move(entries)}};
  fsutil::write_file_atomic(file_, doc.dump(2) + "\n");
}

std::filesystem::path TrustStore::resolve(const std::string& rel) const {
  return file_.parent_path() / rel;
}

CredentialsStore CredentialsStore::open(std::filesystem::path file) {
  CredentialsStore store(std::move(file));
  auto content = fsutil::read_file(store.file_);
  if (!content) return store;

  json doc = json::parse(*content, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw CorruptStoreError("credentials store is not valid JSON: " + store.file_.string());
  }
  if (!doc.contains("schema_version") || doc["schema_version"] != kSchemaVersion) {
    throw CorruptStoreError("credentials store schema version mismatch: " + store.file_.string());
  }
  auto entries = require(doc, "entries", json::value_t::array, "credentials store");
  for (const json& e : entries) {
    if (!e.is_object()) throw CorruptStoreError("credentials entry is not an object");
    StoredCredentials cred;
    cred.ssid.octets = bytes_to_string(require_b64(e, "ssid_b64", "credentials entry"));
    cred.username =
        require(e, "username", json::value_t::string, "credentials entry").get<std::string>();
    cred.password.octets = require_b64(e, "password_b64", "credentials entry");
    if (!store.entries_.emplace(cred.ssid, cred).second) {
      throw CorruptStoreError("duplicate SSID in credentials store: " + cred.ssid.display());
    }
  }
  return store;
}

const StoredCredentials* CredentialsStore::lookup(const Ssid& ssid) const {
  auto it = entries_.find(ssid);
  return it == entries_.end() ? nullptr : &it->second;
}

void CredentialsStore::store(const Ssid& ssid, std::string username, Password password) {
  StoredCredentials cred{ssid, std::move(username), std::move(password)};
  auto it = entries_.find(ssid);
  if (it != entries_.end() && it->second.username == cred.username &&
      it->second.password == cred.password) {
    return;
  }
  entries_.insert_or_assign(ssid, std::move(cred));
  persist();
}

void CredentialsStore::persist() const {
  json entries = json::array();
  for (const auto& [ssid, c] : entries_) {
    entries.push_back({
        {"ssid_b64", crypto::base64_encode(view_of(ssid.octets))},
        {"username", c.username},
        {"password_b64", crypto::base64_encode(c.password.octets)},
    });
  }
  json doc{{"schema_version", kSchemaVersion}, {"entries", std::move(entries)}};
  fsutil::write_file_atomic(file_, doc.dump(2) + "\n");
}

}  // namespace rcms
