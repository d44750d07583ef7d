#include "model.hpp"

#include <algorithm>
#include <set>

namespace fape {

TypeId Domain::findType(const std::string& name) const {
  for (size_t i = 0; i < types.size(); ++i)
    if (types[i].name == name) return static_cast<TypeId>(i);
  return kNone;
}

ObjId Domain::findObject(const std::string& name) const {
  for (size_t i = 0; i < objects.size(); ++i)
    if (objects[i].name == name) return static_cast<ObjId>(i);
  return kNone;
}

SvId Domain::findSv(const std::string& name) const {
  for (size_t i = 0; i < svTemplates.size(); ++i)
    if (svTemplates[i].name == name) return static_cast<SvId>(i);
  return kNone;
}

TaskSymId Domain::findTask(const std::string& name) const {
  for (size_t i = 0; i < tasks.size(); ++i)
    if (tasks[i].name == name) return static_cast<TaskSymId>(i);
  return kNone;
}

RelationId Domain::findRelation(const std::string& name) const {
  for (size_t i = 0; i < relations.size(); ++i)
    if (relations[i].name == name) return static_cast<RelationId>(i);
  return kNone;
}

TypeId Domain::addType(const std::string& name,
                       const std::vector<TypeId>& parents) {
  TypeId id = static_cast<TypeId>(types.size());
  types.push_back(ObjectType{name, parents, {}});
  return id;
}

ObjId Domain::addObject(const std::string& name, TypeId type) {
  ObjId id = static_cast<ObjId>(objects.size());
  objects.push_back(ObjectInfo{name, type});
  // Instance sets of a type include all instances of its subtypes.
  std::vector<TypeId> todo{type};
  std::set<TypeId> seen;
  while (!todo.empty()) {
    TypeId t = todo.back();
    todo.pop_back();
    if (!seen.insert(t).second) continue;
    types[t].instances.push_back(id);
    for (TypeId p : types[t].parents) todo.push_back(p);
  }
  return id;
}

TypeId Domain::unionType(const std::vector<TypeId>& members) {
  std::set<ObjId> all;
  std::string name = "(";
  for (size_t i = 0; i < members.size(); ++i) {
    if (i) name += " or ";
    name += types[members[i]].name;
    for (ObjId o : types[members[i]].instances) all.insert(o);
  }
  name += ")";
  TypeId existing = findType(name);
  if (existing != kNone) return existing;
  TypeId id = addType(name, {});
  types[id].instances.assign(all.begin(), all.end());
  return id;
}

bool Domain::typeHasInstance(TypeId t, ObjId o) const {
  const auto& inst = types[t].instances;
  return std::find(inst.begin(), inst.end(), o) != inst.end();
}

std::vector<TemplateId> Domain::refinementsOf(TaskSymId task) const {
  std::vector<TemplateId> out;
  for (size_t i = 0; i < templates.size(); ++i)
    if (templates[i].task == task) out.push_back(static_cast<TemplateId>(i));
  return out;
}

void Domain::ensureBool() {
  if (boolType != kNone) return;
  boolType = addType("boolean", {});
  trueObj = addObject("true", boolType);
  falseObj = addObject("false", boolType);
}

std::string termToString(const Domain& dom, const Term& t,
                         const BindingNet* net) {
  switch (t.kind) {
    case Term::Kind::Const:
      return t.v >= 0 && t.v < static_cast<int64_t>(dom.objects.size())
                 ? dom.objName(t.v)
                 : std::to_string(t.v);
    case Term::Kind::Var: {
      if (net && net->dom(static_cast<VarId>(t.v)).singleton()) {
        int64_t v = net->dom(static_cast<VarId>(t.v)).soleValue();
        if (v >= 0 && v < static_cast<int64_t>(dom.objects.size()))
          return dom.objName(v);
        return std::to_string(v);
      }
      return "?" + std::to_string(t.v);
    }
    case Term::Kind::Any:
      return "ANY";
    case Term::Kind::Undefined:
      return "UNDEFINED";
  }
  return "?";
}

}  // namespace fape
