"""Prompt enrichment and name pools.

Prompts are enriched by substituting a full name into a template containing
the placeholder token ``[FULL NAME]``; varied names pull the generator toward
a more diverse set of subjects than a generic portrait prompt.
"""

from dataclasses import dataclass
from pathlib import Path

from ..errors import EmptyInputError, MissingPlaceholderError, MultiplePlaceholdersError

PLACEHOLDER = "[FULL NAME]"
DEFAULT_TEMPLATE = "A professional portrait of [FULL NAME]"

# Small synthetic pool used when no name file is supplied.
_BUILTIN_NAMES = (
    "Ada Lovelace", "Ira Chen", "Nadia Okafor", "Mateo Alvarez",
    "Priya Raman", "Yusuf Demir", "Hana Suzuki", "Leila Haddad",
    "Tomás Silva", "Ingrid Berg", "Kwame Mensah", "Sofia Petrova",
    "Declan Murphy", "Amara Diallo", "Ravi Patel", "Mei Lin",
    "Oscar Nilsson", "Zainab Karim", "Luca Romano", "Anya Volkova",
    "Jamal Wright", "Noor Rahimi", "Pablo Ortega", "Sanna Koski",
    "Tariq Aziz", "Elena Marino", "Bao Tran", "Femi Adeyemi",
    "Greta Hoffmann", "Idris Kone", "Carmen Vega", "Arjun Nair",
)


@dataclass(frozen=True)
class NamePool:
    names: tuple
    source: str = "unknown"

    def __post_init__(self):
        if not self.names:
            raise EmptyInputError("name pool is empty")
        for n in self.names:
            if not isinstance(n, str) or not n.strip() or n != n.strip():
                raise ValueError(f"bad name entry: {n!r}")

    def __len__(self):
        return len(self.names)

    def name_for(self, index: int) -> str:
        return self.names[index % len(self.names)]


def builtin_name_pool() -> NamePool:
    return NamePool(names=_BUILTIN_NAMES, source="builtin")


def load_name_pool(path) -> NamePool:
    """Read a UTF-8 name file, one full name per line; blank lines skipped."""
    path = Path(path)
    names = tuple(
        line.strip() for line in path.read_text(encoding="utf-8").splitlines() if line.strip()
    )
    return NamePool(names=names, source=str(path))


def enrich_prompt(template: str, full_name: str) -> str:
    """Substitute the placeholder token with the given full name, verbatim."""
    count = template.count(PLACEHOLDER)
    if count == 0:
        raise MissingPlaceholderError(f"template lacks {PLACEHOLDER!r}: {template!r}")
    if count > 1:
        raise MultiplePlaceholdersError(f"template has {count} placeholders: {template!r}")
    return template.replace(PLACEHOLDER, full_name)
