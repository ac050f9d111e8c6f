// Copyright 2026 The Toskose Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <expat.h>

#include <cctype>
#include <charconv>
#include <cstdint>
#include <cmath>
#include <memory>
#include <vector>

#include "toskose/common/error.hpp"
#include "toskose/xmlrpc/xmlrpc.hpp"

namespace toskose::xmlrpc {
namespace {

struct Element {
  std::string name;
  std::string text;
  std::vector<Element> children;

  const Element* child(std::string_view n) const {
    for (const auto& c : children) {
      if (c.name == n) return &c;
    }
    return nullptr;
  }
};

[[noreturn]] void malformed(const std::string& why) {
  fail(Errc::syntax_error, "malformed XML-RPC document: " + why);
}

struct Builder {
  std::vector<Element> stack;
  Element root;
  bool done = false;
};

void XMLCALL on_start(void* data, const XML_Char* name, const XML_Char**) {
  auto* b = static_cast<Builder*>(data);
  b->stack.push_back(Element{name, {}, {}});
}

void XMLCALL on_end(void* data, const XML_Char*) {
  auto* b = static_cast<Builder*>(data);
  Element e = std::move(b->stack.back());
  b->stack.pop_back();
  if (b->stack.empty()) {
    b->root = std::move(e);
    b->done = true;
  } else {
    b->stack.back().children.push_back(std::move(e));
  }
}

void XMLCALL on_text(void* data, const XML_Char* s, int len) {
  auto* b = static_cast<Builder*>(data);
  if (!b->stack.empty()) b->stack.back().text.append(s, static_cast<std::size_t>(len));
}

Element parse_xml(std::string_view xml) {
  std::unique_ptr<XML_ParserStruct, decltype(&XML_ParserFree)> parser(
      XML_ParserCreate("UTF-8"), &XML_ParserFree);
  if (!parser) fail(Errc::io_error, "cannot allocate XML parser");
  Builder b;
  XML_SetUserData(parser.get(), &b);
  XML_SetElementHandler(parser.get(), on_start, on_end);
  XML_SetCharacterDataHandler(parser.get(), on_text);
  if (XML_Parse(parser.get(), xml.data(), static_cast<int>(xml.size()), XML_TRUE) ==
      XML_STATUS_ERROR) {
    malformed(XML_ErrorString(XML_GetErrorCode(parser.get())));
  }
  if (!b.done) malformed("no root element");
  return std::move(b.root);
}

Value parse_value(const Element& v) {
  if (v.name != "value") malformed("expected <value>, got <" + v.name + ">");
  if (v.children.empty()) return v.text;
  const Element& t = v.children.front();
  if (t.name == "string" || t.name == "dateTime.iso8601" || t.name == "base64") return t.text;
  if (t.name == "int" || t.name == "i4" || t.name == "i8") {
    long long n = 0;
    std::string_view s = t.text;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
    if (s.empty() || ec != std::errc() || p != s.data() + s.size()) malformed("bad int " + t.text);
    return n;
  }
  if (t.name == "boolean") {
    if (t.text == "1") return true;
    if (t.text == "0") return false;
    malformed("bad boolean " + t.text);
  }
  if (t.name == "double") {
    try {
      return std::stod(t.text);
    } catch (const std::exception&) {
      malformed("bad double " + t.text);
    }
  }
  if (t.name == "nil") return nullptr;
  if (t.name == "array") {
    Value out = Value::array();
    const Element* data = t.child("data");
    if (data == nullptr) malformed("array without <data>");
    for (const auto& item : data->children) out.push_back(parse_value(item));
    return out;
  }
  if (t.name == "struct") {
    Value out = Value::object();
    for (const auto& m : t.children) {
      if (m.name != "member") malformed("struct child <" + m.name + ">");
      const Element* name = m.child("name");
      const Element* value = m.child("value");
      if (name == nullptr || value == nullptr) malformed("incomplete struct member");
      out[name->text] = parse_value(*value);
    }
    return out;
  }
  malformed("unknown type <" + t.name + ">");
}

// Replace bytes that are not valid UTF-8, or not allowed in XML 1.0, by '?'.
void append_escaped(std::string& out, std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    if (c < 0x80) {
      switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '\r': out += "&#13;"; break;
        default:
          if (c < 0x20 && c != '\t' && c != '\n') {
            out += '?';
          } else {
            out += static_cast<char>(c);
          }
      }
      ++i;
      continue;
    }
    std::size_t len = c >= 0xF0 && c <= 0xF4 ? 4 : c >= 0xE0 ? 3 : c >= 0xC2 && c <= 0xDF ? 2 : 0;
    if (c >= 0xF5) len = 0;
    bool ok = len > 0 && i + len <= s.size();
    for (std::size_t k = 1; ok && k < len; ++k) {
      ok = (static_cast<unsigned char>(s[i + k]) & 0xC0) == 0x80;
    }
    if (ok && len == 3) {
      const auto c1 = static_cast<unsigned char>(s[i + 1]);
      ok = !(c == 0xE0 && c1 < 0xA0) && !(c == 0xED && c1 >= 0xA0);
    }
    if (ok && len == 4) {
      const auto c1 = static_cast<unsigned char>(s[i + 1]);
      ok = !(c == 0xF0 && c1 < 0x90) && !(c == 0xF4 && c1 >= 0x90);
    }
    if (ok) {
      out.append(s.substr(i, len));
      i += len;
    } else {
      out += '?';
      ++i;
    }
  }
}

void append_value(std::string& out, const Value& v) {
  out += "<value>";
  switch (v.type()) {
    case Value::value_t::null: out += "<nil/>"; break;
    case Value::value_t::boolean: out += v.get<bool>() ? "<boolean>1</boolean>" : "<boolean>0</boolean>"; break;
    case Value::value_t::number_integer:
    case Value::value_t::number_unsigned: {
      const auto n = v.get<long long>();
      const bool small = n >= INT32_MIN && n <= INT32_MAX;
      out += small ? "<int>" : "<i8>";
      out += std::to_string(n);
      out += small ? "</int>" : "</i8>";
      break;
    }
    case Value::value_t::number_float: {
      out += "<double>";
      char buf[64];
      auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v.get<double>());
      out.append(buf, p);
      out += "</double>";
      break;
    }
    case Value::value_t::string:
      out += "<string>";
      append_escaped(out, v.get_ref<const std::string&>());
      out += "</string>";
      break;
    case Value::value_t::array:
      out += "<array><data>";
      for (const auto& item : v) append_value(out, item);
      out += "</data></array>";
      break;
    case Value::value_t::object:
      out += "<struct>";
      for (const auto& [k, item] : v.items()) {
        out += "<member><name>";
        append_escaped(out, k);
        out += "</name>";
        append_value(out, item);
        out += "</member>";
      }
      out += "</struct>";
      break;
    default:
      out += "<nil/>";
  }
  out += "</value>";
}

constexpr std::string_view kProlog = "<?xml version=\"1.0\"?>\n";

}  // namespace

std::string encode_call(const std::string& method, const Value& params) {
  std::string out(kProlog);
  out += "<methodCall><methodName>";
  append_escaped(out, method);
  out += "</methodName><params>";
  for (const auto& p : params) {
    out += "<param>";
    append_value(out, p);
    out += "</param>";
  }
  out += "</params></methodCall>\n";
  return out;
}

std::string encode_response(const Value& result) {
  std::string out(kProlog);
  out += "<methodResponse><params><param>";
  append_value(out, result);
  out += "</param></params></methodResponse>\n";
  return out;
}

std::string encode_fault(int code, const std::string& message) {
  std::string out(kProlog);
  out += "<methodResponse><fault>";
  append_value(out, Value{{"faultCode", code}, {"faultString", message}});
  out += "</fault></methodResponse>\n";
  return out;
}

MethodCall decode_call(std::string_view xml) {
  const Element root = parse_xml(xml);
  if (root.name != "methodCall") malformed("expected <methodCall>");
  const Element* name = root.child("methodName");
  if (name == nullptr || name->text.empty()) malformed("missing <methodName>");
  MethodCall call{name->text, Value::array()};
  if (const Element* params = root.child("params")) {
    for (const auto& p : params->children) {
      const Element* v = p.child("value");
      if (p.name != "param" || v == nullptr) malformed("bad <param>");
      call.params.push_back(parse_value(*v));
    }
  }
  return call;
}

Value decode_response(std::string_view xml) {
  const Element root = parse_xml(xml);
  if (root.name != "methodResponse") malformed("expected <methodResponse>");
  if (const Element* fault = root.child("fault")) {
    const Element* v = fault->child("value");
    if (v == nullptr) malformed("empty fault");
    Value f = parse_value(*v);
    if (!f.is_object() || !f.contains("faultCode")) malformed("fault without faultCode");
    const auto code = f["faultCode"].is_number_integer() ? f["faultCode"].get<int>() : 0;
    const auto message = f.value("faultString", std::string());
    throw Fault(code, message);
  }
  const Element* params = root.child("params");
  if (params == nullptr || params->children.empty()) return nullptr;
  const Element* v = params->children.front().child("value");
  if (v == nullptr) malformed("response param without value");
  return parse_value(*v);
}

void Dispatcher::add(std::string method, Handler handler) {
  handlers_[std::move(method)] = std::move(handler);
}

std::vector<std::string> Dispatcher::methods() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : handlers_) out.push_back(name);
  return out;
}

std::string Dispatcher::handle(std::string_view request) const {
  try {
    const auto call = decode_call(request);
    if (call.method == "system.listMethods") {
      Value names = Value::array();
      for (const auto& m : methods()) names.push_back(m);
      names.push_back("system.listMethods");
      return encode_response(names);
    }
    auto it = handlers_.find(call.method);
    if (it == handlers_.end()) {
      return encode_fault(faults::kUnknownMethod, "UNKNOWN_METHOD");
    }
    return encode_response(it->second(call.params));
  } catch (const Fault& f) {
    return encode_fault(f.code(), f.what());
  } catch (const Error& e) {
    if (e.code() == Errc::syntax_error) return encode_fault(faults::kBadArguments, e.what());
    return encode_fault(faults::kFailed, e.what());
  } catch (const std::exception& e) {
    return encode_fault(faults::kFailed, e.what());
  }
}

}  // namespace toskose::xmlrpc
