import json
import logging
import os


class Settings:
    """Class to manage workbench settings"""

    # Default settings
    DEFAULT_SETTINGS = {
        'data_dir': os.path.join(os.path.expanduser("~"), "pn-slicer"),
        'output_dir': 'output',
        'console_log_level': 'WARNING',
        'oracle_depth': 6,
        'oracle_node_budget': 1_000_000,  # Firing-tree nodes before ExplosionCap
        'brute_force_ceiling': 12,  # Max |P| + |T| for the brute-force minimum
        'state_cap': 50_000,  # Markings explored by behavioural checks
        'default_k_bound': 2,
        'max_candidates': 100_000,  # Completed backward candidates
        'max_expansions': 1_000_000,  # Recursive backward expansions
        'witness_depth': 6,
        'witness_node_budget': 100_000,
        'bench_runs_per_net': 20,
        'bench_min_places': 1,
        'bench_max_places': 5,
        'bench_seed': 42,
        'bench_threads': 4,
    }

    def __init__(self, settings_file=None):
        """Initialize settings"""
        self.logger = logging.getLogger(__name__)
        self.settings = self.DEFAULT_SETTINGS.copy()
        self.settings_file = settings_file
        self.load_settings()

    def load_settings(self):
        """Load settings from the settings file"""
        # An explicit file (or $PN_SLICER_SETTINGS) wins over the home directory
        home_settings_file = os.path.join(os.path.expanduser("~"), ".pn-slicer-settings.json")
        explicit_file = self.settings_file or os.environ.get('PN_SLICER_SETTINGS')

        if explicit_file:
            self.settings_file = explicit_file
        else:
            self.settings_file = home_settings_file

        if not os.path.exists(self.settings_file):
            # If no settings file exists, create one with the defaults
            self.save_settings()
            return

        try:
            with open(self.settings_file, 'r') as f:
                loaded_settings = json.load(f)
                # Update settings with loaded values
                self.settings.update(loaded_settings)
                self.logger.info(f"Settings loaded from {self.settings_file}")
        except (json.JSONDecodeError, IOError) as e:
            self.logger.error(f"Error loading settings: {str(e)}")
            # If there's an error, keep the defaults
            self.save_settings()

    def save_settings(self):
        """Save settings to the settings file"""
        try:
            with open(self.settings_file, 'w') as f:
                json.dump(self.settings, f, indent=2)
            self.logger.info(f"Settings saved to {self.settings_file}")
            return True
        except IOError as e:
            self.logger.error(f"Error saving settings: {str(e)}")
            return False

    def get(self, key, default=None):
        """Get a setting value"""
        return self.settings.get(key, default)

    def get_int(self, key):
        """Get an integer setting, falling back to the default on bad values"""
        value = self.settings.get(key, self.DEFAULT_SETTINGS.get(key))
        try:
            value = int(value)
        except (TypeError, ValueError):
            self.logger.error(f"Setting {key}={value!r} is not an integer, using default")
            return self.DEFAULT_SETTINGS[key]
        return value

    def set(self, key, value):
        """Set a setting value"""
        self.settings[key] = value
        return self.save_settings()

    def get_data_dir(self):
        """Get the data directory"""
        data_dir = self.get('data_dir')
        # Ensure the directory exists
        os.makedirs(data_dir, exist_ok=True)
        return data_dir

    def get_output_dir(self):
        """Get the slice output directory (relative paths resolve against the working directory)"""
        return os.environ.get('PN_SLICER_OUTPUT_DIR') or self.get('output_dir')

# Create a singleton instance
settings = Settings()
