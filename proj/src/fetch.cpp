#include "ft/ingest.hpp"

#ifdef FT_WITH_TLS
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

namespace ft {

std::string fetch_remote_csv(const std::string& url) {
    std::string scheme, rest;
    if (url.rfind("https://", 0) == 0) {
        scheme = "https";
        rest = url.substr(8);
    } else if (url.rfind("http://", 0) == 0) {
        scheme = "http";
        rest = url.substr(7);
    } else {
        throw TransportError("unsupported URL scheme in '" + url + "'");
    }
#ifndef FT_WITH_TLS
    if (scheme == "https") throw TransportError("built without TLS support, cannot fetch " + url);
#endif

    const auto slash = rest.find('/');
    const std::string host = slash == std::string::npos ? rest : rest.substr(0, slash);
    const std::string path = slash == std::string::npos ? "/" : rest.substr(slash);

    httplib::Client client((scheme + "://" + host).c_str());
    client.set_connection_timeout(15, 0);
    client.set_read_timeout(60, 0);
    client.set_follow_location(true);

    auto res = client.Get(path.c_str());
    if (!res) throw TransportError("request to " + url + " failed: " + httplib::to_string(res.error()));
    if (res->status < 200 || res->status >= 300)
        throw TransportError("GET " + url + " returned status " + std::to_string(res->status));
    return res->body;
}

} // namespace ft
