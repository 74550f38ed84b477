#ifndef SITEBENCH_TLS_SCANNER_H_
#define SITEBENCH_TLS_SCANNER_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "sitebench/facts.h"
#include "sitebench/net.h"

namespace sitebench {

// max-age of a Strict-Transport-Security value; nullopt when absent or
// unparseable.
std::optional<int64_t> ParseHstsMaxAge(std::string_view value);

// Raw SSLv3 ClientHello carrying |sni|, for servers OpenSSL can no longer
// talk to.
std::string BuildSslv3ClientHello(std::string_view sni);

// Classifies the first bytes a server sent back after an SSLv3 ClientHello:
// a ServerHello with version 3.0 means offered, an alert or anything else
// means refused, too few bytes means unknown.
ProtocolSupport ClassifySslv3Reply(std::string_view reply);

// Probes the web server of |host|: one handshake per protocol version
// (highest first), one validating handshake that also reads the HSTS header,
// and one plain-HTTP HEAD for the redirect. At most seven connections.
// |error| is kConnectionFailed/kResolveFailed when HTTPS is unreachable.
TlsFacts ScanWebTls(std::string_view host,
                    const NetOptions& options,
                    NetError* error);

// SMTP dialog on the configured SMTP port of |mx_host|: greeting, EHLO,
// STARTTLS with a validating handshake, then one STARTTLS session per
// protocol version. All fields stay unknown when |mx_host| is absent.
MailTlsFacts ScanMailTls(const std::optional<std::string>& mx_host,
                         const NetOptions& options,
                         NetError* error);

}  // namespace sitebench

#endif  // SITEBENCH_TLS_SCANNER_H_
