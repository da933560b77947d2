import pytest
from unittest.mock import patch

from app.utils.utils import allowed_file, format_percent, list_net_files, slugify

@pytest.fixture
def mock_allowed_extensions():
    with patch('app.utils.utils.ALLOWED_EXTENSIONS', {'pnml', 'xml'}):
        yield

class TestAllowedFile:
    def test_allowed_extensions(self, mock_allowed_extensions):
        """Test allowed_file function with allowed extensions"""
        assert allowed_file('net.pnml') is True
        assert allowed_file('net.xml') is True

    def test_disallowed_extensions(self, mock_allowed_extensions):
        """Test allowed_file function with disallowed extensions"""
        assert allowed_file('net.lola') is False
        assert allowed_file('net.dot') is False

    def test_no_extension(self, mock_allowed_extensions):
        """Test allowed_file function with no extension"""
        assert allowed_file('net') is False

    def test_empty_filename(self, mock_allowed_extensions):
        """Test allowed_file function with empty filename"""
        assert allowed_file('') is False

    def test_case_insensitivity(self, mock_allowed_extensions):
        """Test allowed_file function is case insensitive"""
        assert allowed_file('net.PNML') is True
        assert allowed_file('net.Xml') is True

class TestListNetFiles:
    def test_sorted_and_filtered(self, tmp_path):
        """Test only net documents directly inside the directory are listed"""
        for name in ['b.pnml', 'a.xml', 'notes.txt']:
            (tmp_path / name).write_text('')
        (tmp_path / 'nested').mkdir()
        (tmp_path / 'nested' / 'c.pnml').write_text('')
        assert list_net_files(str(tmp_path)) == [str(tmp_path / 'a.xml'),
                                                 str(tmp_path / 'b.pnml')]

    def test_missing_directory(self, tmp_path):
        """Test a missing directory lists nothing"""
        assert list_net_files(str(tmp_path / 'missing')) == []

class TestSlugify:
    def test_basic_slugify(self):
        """Test basic slugify functionality keeps case"""
        assert slugify('Net B') == 'Net_B'

    def test_special_characters(self):
        """Test slugify with special characters"""
        assert slugify('mutex, v2!') == 'mutex_v2'
        assert slugify('token-ring_3') == 'token-ring_3'

    def test_unicode_characters(self):
        """Test slugify with unicode characters"""
        assert slugify('Pétri') == 'Petri'
        assert slugify('こんにちは世界') == 'net'  # Non-ASCII characters are removed

    def test_leading_trailing_separators(self):
        """Test slugify removes leading/trailing separators"""
        assert slugify('--net--') == 'net'
        assert slugify('  workflow  ') == 'workflow'

    def test_empty_string(self):
        """Test slugify with empty string"""
        assert slugify('') == 'net'

class TestFormatPercent:
    def test_two_decimals(self):
        """Test percentages always carry two decimals"""
        assert format_percent(40.0) == '40.00'
        assert format_percent(33.33) == '33.33'
        assert format_percent(0) == '0.00'
