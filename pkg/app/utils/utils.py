import os
import re

import unicodedata

from app.config import ALLOWED_EXTENSIONS


def allowed_file(filename):
    """Check if the file has a net document extension"""
    return '.' in filename and \
        filename.rsplit('.', 1)[1].lower() in ALLOWED_EXTENSIONS


def list_net_files(directory):
    """Sorted paths of the net documents directly inside a directory"""
    if not os.path.isdir(directory):
        return []
    return sorted(os.path.join(directory, name) for name in os.listdir(directory)
                  if allowed_file(name) and os.path.isfile(os.path.join(directory, name)))


def slugify(text):
    """
    Convert a net name to a file-name stem.
    - Normalize to ASCII
    - Replace runs of characters other than letters, digits, '-' and '_' with '_'
    - Strip leading/trailing separators

    Case is kept so that output files carry the net's own name.
    """
    # Normalize unicode characters
    text = unicodedata.normalize('NFKD', text).encode('ascii', 'ignore').decode('ascii')
    text = re.sub(r'[^A-Za-z0-9_-]+', '_', text)
    text = text.strip('_-')
    # If empty, use a default
    if not text:
        text = 'net'
    return text


def format_percent(value):
    """Two-decimal percentage text (value is already rounded half-up)"""
    return f"{value:.2f}"
