from app.properties.properties import (BEHAVIOURAL, NON_PRESERVED_STRUCTURAL, Outcome,
                                       PRESERVED_BEHAVIOURAL, PRESERVED_STRUCTURAL,
                                       PreservationRow, PropertyId, PropertyVerdict,
                                       STRUCTURAL, UNIMPLEMENTED, check_behavioural,
                                       check_property, check_structural,
                                       preservation_report)

__all__ = ['BEHAVIOURAL', 'NON_PRESERVED_STRUCTURAL', 'Outcome', 'PRESERVED_BEHAVIOURAL',
           'PRESERVED_STRUCTURAL', 'PreservationRow', 'PropertyId', 'PropertyVerdict',
           'STRUCTURAL', 'UNIMPLEMENTED', 'check_behavioural', 'check_property',
           'check_structural', 'preservation_report']
