from app.utils.utils import allowed_file, format_percent, list_net_files, slugify

__all__ = ['allowed_file', 'format_percent', 'list_net_files', 'slugify']
