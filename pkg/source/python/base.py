from .errors import UsageError


class ClassRegistry:
    """Name -> object table filled by a decorator at import time."""

    def __init__(self, kind):
        self.kind = kind
        self.classes = {}

    def register(self, name):
        def decorator(obj):
            if name in self.classes:
                raise ValueError(f"{self.kind} {name!r} registered twice")
            self.classes[name] = obj
            return obj
        return decorator

    def get_class(self, name):
        try:
            return self.classes[name]
        except KeyError:
            known = ", ".join(self.classes)
            raise UsageError(f"unknown {self.kind} {name!r} (expected one of: {known})") from None

    def names(self):
        return list(self.classes)


# feature-set selectors: "base", "base+signal", "base+signal+hint"
registry = ClassRegistry("feature set")
