#!/usr/bin/env python
import re
import subprocess
import sys
from pathlib import Path

INIT_FILE = Path("src/ccdalg/__init__.py")
VERSION_RE = r'__version__ = ["\'](\d+)\.(\d+)\.(\d+)(-dev)?["\']'


def run_command(command):
    try:
        subprocess.run(command, check=True, shell=True)
    except subprocess.CalledProcessError as e:
        print(f"Error executing command: {command}")
        print(f"Error: {e}")
        sys.exit(1)


def next_version(content, version_type):
    match = re.search(VERSION_RE, content)
    if match is None:
        print(f"No __version__ found in {INIT_FILE}")
        sys.exit(1)
    major, minor, patch = map(int, match.group(1, 2, 3))
    current = f"{major}.{minor}.{patch}{match.group(4) or ''}"

    # a -dev version is released as is
    if version_type == "release" and match.group(4):
        return current, f"{major}.{minor}.{patch}"
    if version_type == "major":
        return current, f"{major + 1}.0.0"
    if version_type == "minor":
        return current, f"{major}.{minor + 1}.0"
    if version_type == "patch":
        return current, f"{major}.{minor}.{patch + 1}"
    print("Invalid version type. Use 'major', 'minor', 'patch' or 'release'")
    sys.exit(1)


def bump_version(version_type):
    content = INIT_FILE.read_text()
    current_version, new_version = next_version(content, version_type)
    INIT_FILE.write_text(re.sub(VERSION_RE, f'__version__ = "{new_version}"', content))

    run_command(f"git add {INIT_FILE}")
    run_command(f'git commit -m "release {new_version}: version bump commit"')
    run_command(f"git tag v{new_version}")
    run_command("git push --follow-tags")

    print(f"Version bumped from {current_version} to {new_version}")


if __name__ == "__main__":
    if len(sys.argv) != 2:
        print("Usage: bump_version.py <major|minor|patch|release>")
        sys.exit(1)

    bump_version(sys.argv[1])
