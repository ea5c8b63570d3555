"""Dynamic schema layer and instance model.

Classes, attributes and references are declared in data (parsed from a
plain-text schema file) and queried at runtime, so one command
implementation can serve any schema variant.  Objects are plain attribute
maps; an attribute that was never set is UNSET, which is distinct from
empty string or zero and is represented as the absence of the key
(``get_attribute`` returns ``None``).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ModelError, SchemaError

KIND_STRING = "string"
KIND_INT = "int"
_KINDS = (KIND_STRING, KIND_INT)

MULT_ONE = "one"
MULT_MANY = "many"


@dataclass(frozen=True)
class AttributeDef:
    name: str
    kind: str  # "string" | "int"


@dataclass(frozen=True)
class ReferenceDef:
    name: str
    target: str  # class name, resolved against the owning MetaModel
    many: bool


class MetaClass:
    """A declared class: named attribute and reference slots.

    Attribute and reference names share one namespace within the class;
    the instance file grammar needs the first token of a line to identify
    the feature unambiguously.
    """

    def __init__(self, name, attributes=(), references=()):
        self.name = name
        self.attributes: dict[str, AttributeDef] = {}
        self.references: dict[str, ReferenceDef] = {}
        for a in attributes:
            self._check_fresh(a.name)
            if a.kind not in _KINDS:
                raise SchemaError(f"unknown attribute kind {a.kind!r} on {name}.{a.name}")
            self.attributes[a.name] = a
        for r in references:
            self._check_fresh(r.name)
            self.references[r.name] = r

    def _check_fresh(self, feature_name):
        if feature_name in self.attributes or feature_name in self.references:
            raise SchemaError(f"duplicate feature {feature_name!r} in class {self.name}")

    def __repr__(self):
        return f"MetaClass({self.name!r})"


class MetaModel:
    """A set of uniquely named classes with resolved reference targets."""

    def __init__(self, name, classes):
        self.name = name
        self.classes: dict[str, MetaClass] = {}
        for c in classes:
            if c.name in self.classes:
                raise SchemaError(f"duplicate class {c.name!r}")
            self.classes[c.name] = c
        for c in self.classes.values():
            for r in c.references.values():
                if r.target not in self.classes:
                    raise SchemaError(
                        f"reference {c.name}.{r.name} targets undeclared class {r.target!r}"
                    )

    def cls(self, class_name) -> MetaClass:
        try:
            return self.classes[class_name]
        except KeyError:
            raise SchemaError(f"unknown class {class_name!r}") from None

    def has_class(self, class_name) -> bool:
        return class_name in self.classes

    def has_attribute(self, class_name, attr_name) -> bool:
        return attr_name in self.cls(class_name).attributes

    def __repr__(self):
        return f"MetaModel({self.name!r}, classes={list(self.classes)})"


def load_schema(text, name="model") -> MetaModel:
    """Parse schema text into a MetaModel.

    Grammar: ``class <Name>`` at column 0, feature lines indented exactly
    two spaces: ``attr <name> <string|int>`` or
    ``ref <name> -> <Target> <one|many>``.  Blank lines and full-line
    ``#`` comments are ignored.
    """
    classes: list[MetaClass] = []
    cur_name = None
    cur_attrs: list[AttributeDef] = []
    cur_refs: list[ReferenceDef] = []
    cur_features: set[str] = set()
    ref_lines: list[tuple[int, str, str]] = []  # (line, class, target) for late checks

    def finish():
        if cur_name is not None:
            classes.append(MetaClass(cur_name, cur_attrs, cur_refs))

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip()
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        if not line.startswith(" "):
            tokens = line.split()
            if len(tokens) != 2 or tokens[0] != "class":
                raise SchemaError(f"expected 'class <Name>', got {line!r}", line=lineno)
            finish()
            cur_name = tokens[1]
            cur_attrs, cur_refs = [], []
            cur_features = set()
            continue
        if not (line.startswith("  ") and not line.startswith("   ")):
            raise SchemaError("feature lines must be indented two spaces", line=lineno)
        if cur_name is None:
            raise SchemaError("feature line before any class", line=lineno)
        tokens = line.split()
        if tokens[0] == "attr" and len(tokens) == 3:
            if tokens[2] not in _KINDS:
                raise SchemaError(f"unknown kind {tokens[2]!r} (use string or int)", line=lineno)
            feature = tokens[1]
            cur_attrs.append(AttributeDef(feature, tokens[2]))
        elif tokens[0] == "ref" and len(tokens) == 5 and tokens[2] == "->":
            if tokens[4] not in (MULT_ONE, MULT_MANY):
                raise SchemaError(
                    f"unknown multiplicity {tokens[4]!r} (use one or many)", line=lineno
                )
            feature = tokens[1]
            cur_refs.append(ReferenceDef(feature, tokens[3], tokens[4] == MULT_MANY))
            ref_lines.append((lineno, cur_name, tokens[3]))
        else:
            raise SchemaError(f"malformed feature line {line.strip()!r}", line=lineno)
        if feature in cur_features:
            raise SchemaError(
                f"duplicate feature {feature!r} in class {cur_name}", line=lineno
            )
        cur_features.add(feature)
    finish()

    declared = {c.name for c in classes}
    for lineno, class_name, target in ref_lines:
        if target not in declared:
            raise SchemaError(
                f"reference in class {class_name} targets undeclared class {target!r}",
                line=lineno,
            )
    return MetaModel(name, classes)


@dataclass(eq=False)
class DynamicObject:
    """A schema-conforming instance.

    ``eq=False`` keeps identity hashing so editors can key registries by
    the object itself.  Value comparison goes through ``model_equals``.
    """

    id: str
    class_name: str
    attributes: dict = field(default_factory=dict)  # name -> str | int (absent = UNSET)
    references: dict = field(default_factory=dict)  # name -> id | list[id]

    def __repr__(self):
        return f"DynamicObject({self.id!r}, {self.class_name!r})"


class InstanceModel:
    """Objects keyed by id, governed by one schema."""

    def __init__(self, schema: MetaModel):
        self.schema = schema
        self.objects: dict[str, DynamicObject] = {}

    def __len__(self):
        return len(self.objects)

    def get(self, obj_id) -> DynamicObject | None:
        return self.objects.get(obj_id)

    def add(self, obj: DynamicObject) -> DynamicObject:
        self.schema.cls(obj.class_name)
        if obj.id in self.objects:
            raise ModelError(f"duplicate object id {obj.id!r}")
        self.objects[obj.id] = obj
        return obj

    def new_object(self, class_name, obj_id) -> DynamicObject:
        """Create an object with all attributes UNSET and add it."""
        if not obj_id:
            raise ModelError("object id must be non-empty")
        return self.add(DynamicObject(obj_id, class_name))

    def set_attribute(self, obj: DynamicObject, name, value):
        adef = self.schema.cls(obj.class_name).attributes.get(name)
        if adef is None:
            raise ModelError(f"class {obj.class_name} has no attribute {name!r}")
        if adef.kind == KIND_INT:
            if not isinstance(value, int) or isinstance(value, bool):
                raise ModelError(f"{obj.class_name}.{name} expects an int, got {value!r}")
        elif not isinstance(value, str):
            raise ModelError(f"{obj.class_name}.{name} expects a string, got {value!r}")
        obj.attributes[name] = value

    def get_attribute(self, obj: DynamicObject, name):
        """Return the attribute value, or None when UNSET."""
        if name not in self.schema.cls(obj.class_name).attributes:
            raise ModelError(f"class {obj.class_name} has no attribute {name!r}")
        return obj.attributes.get(name)

    def set_reference(self, obj: DynamicObject, name, target_id):
        """Assign (one) or add-if-absent (many).  Target existence is
        checked by ``validate``, not here, so files may forward-reference."""
        rdef = self.schema.cls(obj.class_name).references.get(name)
        if rdef is None:
            raise ModelError(f"class {obj.class_name} has no reference {name!r}")
        if rdef.many:
            targets = obj.references.setdefault(name, [])
            if target_id not in targets:
                targets.append(target_id)
        else:
            obj.references[name] = target_id

    def get_reference(self, obj: DynamicObject, name):
        if name not in self.schema.cls(obj.class_name).references:
            raise ModelError(f"class {obj.class_name} has no reference {name!r}")
        return obj.references.get(name)

    def validate(self):
        """Check every invariant: ids, declared features, kinds, targets."""
        for obj_id, obj in self.objects.items():
            if obj.id != obj_id:
                raise ModelError(f"object stored under {obj_id!r} carries id {obj.id!r}")
            cls = self.schema.cls(obj.class_name)
            for name, value in obj.attributes.items():
                adef = cls.attributes.get(name)
                if adef is None:
                    raise ModelError(f"{obj_id}: undeclared attribute {name!r}")
                ok = (
                    isinstance(value, int) and not isinstance(value, bool)
                    if adef.kind == KIND_INT
                    else isinstance(value, str)
                )
                if not ok:
                    raise ModelError(f"{obj_id}.{name}: kind mismatch for {value!r}")
            for name, value in obj.references.items():
                rdef = cls.references.get(name)
                if rdef is None:
                    raise ModelError(f"{obj_id}: undeclared reference {name!r}")
                targets = value if rdef.many else [value]
                for t in targets:
                    target = self.objects.get(t)
                    if target is None:
                        raise ModelError(f"{obj_id}.{name}: target {t!r} does not exist")
                    if target.class_name != rdef.target:
                        raise ModelError(
                            f"{obj_id}.{name}: target {t!r} is a "
                            f"{target.class_name}, expected {rdef.target}"
                        )


def _reference_view(obj: DynamicObject):
    # many-references compare as sets; single references as plain ids
    return {
        name: frozenset(value) if isinstance(value, list) else value
        for name, value in obj.references.items()
    }


def model_equals(a: InstanceModel, b: InstanceModel) -> bool:
    """Order-independent structural equality.

    Same id set, and per id: same class, same attribute map (UNSET stays
    distinct from any set value), same reference targets.
    """
    if a.objects.keys() != b.objects.keys():
        return False
    for obj_id, oa in a.objects.items():
        ob = b.objects[obj_id]
        if oa.class_name != ob.class_name:
            return False
        if oa.attributes != ob.attributes:
            return False
        if _reference_view(oa) != _reference_view(ob):
            return False
    return True


def copy_model(model: InstanceModel) -> InstanceModel:
    """Deep-copy objects (shares the schema, which is immutable in use)."""
    out = InstanceModel(model.schema)
    for obj in model.objects.values():
        dup = DynamicObject(obj.id, obj.class_name, dict(obj.attributes), {})
        for name, value in obj.references.items():
            dup.references[name] = list(value) if isinstance(value, list) else value
        out.objects[dup.id] = dup
    return out
