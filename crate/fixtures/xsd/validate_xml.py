"""Validate XML files against an XSD with the xmlschema package.

usage: validate_xml.py SCHEMA [--optional-identifier] FILE...

Prints one line per error and exits 1 if any file is invalid, 3 if the
validator itself is unavailable.
"""
import sys

try:
    import xmlschema
except ImportError:
    print("xmlschema is not installed (pip install xmlschema)")
    sys.exit(3)

args = sys.argv[1:]
schema_path = args.pop(0)
optional_identifier = "--optional-identifier" in args
files = [a for a in args if a != "--optional-identifier"]

if optional_identifier:
    # Same schema, with the identifier allowed to be absent.
    import re
    text = open(schema_path, encoding="utf-8").read()
    text, n = re.subn(r'<xs:element name="identifier">', '<xs:element name="identifier" minOccurs="0">', text, count=1)
    if n != 1:
        print("cannot relax the identifier in " + schema_path)
        sys.exit(3)
    schema = xmlschema.XMLSchema(text, base_url=schema_path)
else:
    schema = xmlschema.XMLSchema(schema_path)

bad = 0
for path in files:
    errors = list(schema.iter_errors(path))
    for err in errors:
        print(f"{path}: {err.reason} at {err.path}")
    if errors:
        bad += 1
print(f"{len(files) - bad}/{len(files)} valid")
sys.exit(1 if bad else 0)
