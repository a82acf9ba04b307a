""" Deterministic reports, rendered as text tables or YAML.
"""

import tabulate
import yaml


SECTION_ORDER = (
    "spec", "hypotheses", "basis", "closure", "witnesses", "oracle", "sharpness",
    "pipeline", "disjointness", "reduce", "result",
)


class Section(object):

    def __init__(self, name):
        self.name = name
        self.summary = {}
        self.rows = []
        self.lines = []

    def as_dict(self):
        data = dict(self.summary)
        if self.lines:
            data["lines"] = list(self.lines)
        if self.rows:
            data["rows"] = [dict(row) for row in self.rows]
        return data


class Report(object):
    """ Named sections, always emitted in SECTION_ORDER
    """

    def __init__(self):
        self.sections = {}

    def section(self, name):
        if name not in SECTION_ORDER:
            raise KeyError("unknown report section %s" % name)
        return self.sections.setdefault(name, Section(name))

    def summary(self, name, **values):
        self.section(name).summary.update(values)

    def row(self, name, /, **values):
        self.section(name).rows.append(values)

    def line(self, name, text):
        self.section(name).lines.append(text)

    def ordered(self):
        return [self.sections[name] for name in SECTION_ORDER if name in self.sections]

    def render_text(self):
        chunks = []
        for section in self.ordered():
            chunks.append("== %s ==" % section.name)
            for key, value in section.summary.items():
                chunks.append("%s: %s" % (key, _plain(value)))
            chunks.extend(section.lines)
            if section.rows:
                chunks.append(tabulate.tabulate(
                    [[_plain(value) for value in row.values()] for row in section.rows],
                    headers=list(section.rows[0].keys())))
            chunks.append("")
        return "\n".join(chunks)

    def render_yaml(self):
        data = {section.name: _yaml_value(section.as_dict()) for section in self.ordered()}
        return yaml.safe_dump(data, sort_keys=False, default_flow_style=False, allow_unicode=True)

    def render(self, output_format="text"):
        if output_format == "yaml":
            return self.render_yaml()
        return self.render_text()


def _plain(value):
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, (list, tuple)):
        return " ".join(str(item) for item in value)
    return str(value) if value is not None else ""


def _yaml_value(value):
    if isinstance(value, dict):
        return {str(key): _yaml_value(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_yaml_value(item) for item in value]
    if isinstance(value, (bool, int, str)) or value is None:
        return value
    return str(value)
